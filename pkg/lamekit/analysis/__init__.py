"""Zero counting, theorem checks and verification suites."""

from lamekit.analysis.suites import CheckResult, SuiteReport, expected_segment_zeros, recessive_check, run_suite
from lamekit.analysis.theorems import ComparisonReport, LimitReport, Relation, verify_comparison, verify_limit
from lamekit.analysis.zeros import (
    WindingReport,
    ZeroReport,
    closed_disk_counts,
    count_zeros_segment,
    ode_residual_real_axis,
    ode_residual_segment,
    real_axis_min_modulus,
    winding_unit_circle,
)

__all__ = [
    "CheckResult",
    "ComparisonReport",
    "LimitReport",
    "Relation",
    "SuiteReport",
    "WindingReport",
    "ZeroReport",
    "closed_disk_counts",
    "count_zeros_segment",
    "expected_segment_zeros",
    "ode_residual_real_axis",
    "ode_residual_segment",
    "real_axis_min_modulus",
    "recessive_check",
    "run_suite",
    "verify_comparison",
    "verify_limit",
    "winding_unit_circle",
]
