"""Verification suites run by `lamekit verify`.

Each suite walks a grid of (nu, k) cells and records one `CheckResult` per
checked quantity. A suite passes when no decided check fails. Excluded
parameters and windings refused near them are recorded as skipped checks and
reported separately from passes and failures.

| suite       | checks                                                              |
|-------------|---------------------------------------------------------------------|
| `c1`        | Floquet eigenvalues against the merged Wangerin spectra             |
| `c2`        | interleaving of H(nu) and H(-nu-1)                                  |
| `c3`        | interleaving of the two kinds                                       |
| `z1`        | zero counts on the segment                                          |
| `z2`        | windings on the unit circle, plus closed-disk counts for p <= 3     |
| `recessive` | trailing coefficient ratios tend to eta1                            |
| `limit`     | convergence to the circular limit as k -> 0                         |
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

from lamekit.analysis.theorems import KINDS, verify_comparison, verify_limit
from lamekit.analysis.zeros import closed_disk_counts, count_zeros_segment, winding_unit_circle
from lamekit.config import DEFAULT_CONFIG, SolverConfig
from lamekit.elliptic import modulus_from_k
from lamekit.errors import DomainError, TerminatingSequenceError, WindingRefusedError
from lamekit.recurrence import LameParams, recessive_ratio
from lamekit.special import ell_index, ell_range, lame_polynomials
from lamekit.wangerin import SeriesEigenfunction, eigenfunction

logger = logging.getLogger(__name__)

SuiteName = Literal["c1", "c2", "c3", "z1", "z2", "recessive", "limit"]
"""Names accepted by `run_suite`."""

SUITE_NAMES: tuple[SuiteName, ...] = ("c1", "c2", "c3", "z1", "z2", "recessive", "limit")
DEFAULT_NUS: tuple[float, ...] = (0.3, 1.6, -0.7, -1.5, -2.2, -2.5, -2.7, -4.2)
DEFAULT_KS: tuple[float, ...] = (0.3, 0.5, 0.8)
DEFAULT_DEPTH = 6
LIMIT_KS: tuple[float, ...] = (0.1, 0.05)
LIMIT_MAX_INDEX = 2
LIMIT_ERROR_BOUND = 5e-3
LIMIT_RATIO_RANGE = (2.5, 6.0)
LIMIT_EXACT = 1e-10  # errors below this need no convergence order
RECESSIVE_TOL = 1e-6
RECESSIVE_MAX_N = 200
RECURSION_TOL = 1e-8  # recursion defect relative to max |coeff| and max(1, |h|)
CLOSED_DISK_MAX_P = 3
INTEGER_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check inside a suite.

    Attributes:
        suite: Suite name.
        label: What was checked, e.g. "kind 1 m=3 zero count".
        params: The parameters of the cell.
        passed: Whether the check holds. Always False for a skipped check.
        detail: Short explanation, observed against expected.
        margin: Numeric slack when one is meaningful.
        skipped: The check could not be decided, e.g. an excluded parameter or a refused winding.
    """

    suite: str
    label: str
    params: dict[str, Any]
    passed: bool
    detail: str = ""
    margin: float | None = None
    skipped: bool = False


@dataclass(frozen=True)
class SuiteReport:
    """All checks of one suite."""

    name: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> list[CheckResult]:
        """Decided checks that do not hold."""
        return [c for c in self.checks if not c.passed and not c.skipped]

    @property
    def skipped(self) -> list[CheckResult]:
        """Checks that were not decided."""
        return [c for c in self.checks if c.skipped]

    @property
    def passed(self) -> bool:
        """Whether no decided check failed."""
        return not self.failures


def _comparison(theorem: Literal["C1", "C2", "C3"]) -> Callable[[str, float, float, int, SolverConfig], list[CheckResult]]:
    def run(suite: str, nu: float, k: float, depth: int, config: SolverConfig) -> list[CheckResult]:
        report = verify_comparison(theorem, nu, k, depth, config)
        strict = [r.margin for r in report.relations if r.relation == "<"]
        detail = f"case {report.case}, {len(report.relations)} relations"
        if report.failures:
            detail += "; failed: " + ", ".join(r.label for r in report.failures)
        return [
            CheckResult(
                suite=suite,
                label=f"{theorem} case {report.case}",
                params={"nu": nu, "k": k, "depth": depth},
                passed=report.passed,
                detail=detail,
                margin=min(strict) if strict else None,
            )
        ]

    return run


def expected_segment_zeros(m: int, nu: float) -> int:
    """Zeros of the m-th Wangerin eigenfunction on (iK', K + iK'), either kind.

    m for nu > -3/2, otherwise max(0, m - p) where -p - 3/2 < nu <= -p - 1/2.
    """
    if nu > -1.5:  # noqa: PLR2004
        return m
    p = math.floor(-nu - 0.5)
    return max(0, m - p)


def _z1(suite: str, nu: float, k: float, depth: int, config: SolverConfig) -> list[CheckResult]:
    params = LameParams(nu=nu, modulus=modulus_from_k(k))
    results = []
    for kindj in KINDS:
        for m in range(depth + 1):
            report = count_zeros_segment(eigenfunction(kindj, "SelfAdjoint", m, params, config=config), config)
            expected = expected_segment_zeros(m, nu)
            results.append(
                CheckResult(
                    suite=suite,
                    label=f"kind {kindj} m={m} zero count",
                    params={"nu": nu, "k": k, "kind": kindj, "m": m},
                    passed=report.count == expected,
                    detail=f"{report.count} zeros, expected {expected}, grid {report.grid_size}",
                )
            )
    return results


def _excluded(kindj: int, m: int, nu: float) -> bool:
    """Whether -m - nu (kind 1) or -m - nu - 1 (kind 2) is a positive integer."""
    x = -m - nu - (kindj - 1)
    return x > 0.5 and abs(x - round(x)) < INTEGER_TOL  # noqa: PLR2004


def _z2(suite: str, nu: float, k: float, depth: int, config: SolverConfig) -> list[CheckResult]:
    params = LameParams(nu=nu, modulus=modulus_from_k(k))
    results = []
    for kindj in KINDS:
        for m in range(depth + 1):
            cell = {"nu": nu, "k": k, "kind": kindj, "m": m}
            label = f"kind {kindj} m={m} winding"
            if _excluded(kindj, m, nu):
                results.append(CheckResult(suite=suite, label=label, params=cell, passed=False, detail="excluded parameter", skipped=True))
                continue
            f = eigenfunction(kindj, "SelfAdjoint", m, params, config=config)
            expected = ell_index(kindj, m, nu).ell
            try:
                winding = winding_unit_circle(f, config).winding
            except WindingRefusedError as exc:
                logger.warning("Winding refused for kind %d m=%d nu=%r k=%r: %s", kindj, m, nu, k, exc)
                results.append(CheckResult(suite=suite, label=label, params=cell, passed=False, detail=f"refused: {exc}", skipped=True))
                continue
            segment = count_zeros_segment(f, config).count
            results.append(
                CheckResult(
                    suite=suite,
                    label=label,
                    params=cell,
                    passed=winding == expected and winding >= segment,
                    detail=f"winding {winding}, expected {expected}, segment zeros {segment}",
                )
            )
    return results


def _closed_disk(suite: str, k: float, config: SolverConfig) -> list[CheckResult]:
    modulus = modulus_from_k(k)
    results = []
    for p in range(1, CLOSED_DISK_MAX_P + 1):
        seen = {1: 0, 2: 0}
        for solution in lame_polynomials(p, modulus, config):
            m = seen[solution.kindj]
            seen[solution.kindj] += 1
            expected = ell_range(solution.kindj, m, -p - 1.0)
            counts = closed_disk_counts(solution)
            results.append(
                CheckResult(
                    suite=suite,
                    label=f"p={p} kind {solution.kindj} m={m} closed-disk counts",
                    params={"nu": -p - 1.0, "k": k, "kind": solution.kindj, "m": m},
                    passed=counts == expected,
                    detail=f"{solution.classification}: counts {counts}, expected {expected}",
                )
            )
    return results


def recessive_check(f: SeriesEigenfunction, suite: str = "recessive", cell: dict[str, Any] | None = None) -> CheckResult:
    """Check that the stored coefficients of f form the recessive solution for its own h.

    The coefficients must satisfy the recursion rows with the bound eigenvalue, and
    their trailing consecutive ratios must tend to eta1. A terminating series
    passes when the ratio estimate reports the termination.
    """
    label = f"kind {f.kindj} m={f.m} recessive ratio"
    cell = cell if cell is not None else {"nu": f.params.nu, "k": f.params.modulus.k, "kind": f.kindj, "m": f.m}
    residual = f.recursion_residual()
    residual_bound = RECURSION_TOL * max(1.0, abs(f.h))
    if f.terminating:
        try:
            recessive_ratio(f.coeffs, min(10, f.coeffs.size - 2))
        except TerminatingSequenceError as exc:
            passed = residual < residual_bound
            return CheckResult(suite=suite, label=label, params=cell, passed=passed, detail=f"{exc}; recursion residual {residual:.2e}")
        return CheckResult(suite=suite, label=label, params=cell, passed=False, detail="terminating series not reported")
    eta1 = f.params.modulus.eta1
    ratio = recessive_ratio(f.coeffs, (f.coeffs.size - 2) // 2)
    gap = abs(ratio - eta1)
    return CheckResult(
        suite=suite,
        label=label,
        params=cell,
        passed=gap < RECESSIVE_TOL and residual < residual_bound,
        detail=f"ratio {ratio!r}, eta1 {eta1!r}, recursion residual {residual:.2e}",
        margin=RECESSIVE_TOL - gap,
    )


def _recessive(suite: str, nu: float, k: float, depth: int, config: SolverConfig) -> list[CheckResult]:
    params = LameParams(nu=nu, modulus=modulus_from_k(k))
    tail = min(RECESSIVE_MAX_N, math.floor(RECESSIVE_MAX_N / abs(math.log10(params.modulus.eta1))))
    results = []
    for kindj in KINDS:
        for m in range(depth + 1):
            cell = {"nu": nu, "k": k, "kind": kindj, "m": m}
            f = eigenfunction(kindj, "SelfAdjoint", m, params, config=config, truncation=m + tail)
            results.append(recessive_check(f, suite, cell))
    return results


def _limit(suite: str, nu: float, depth: int, config: SolverConfig) -> list[CheckResult]:
    results = []
    for kindj in KINDS:
        for m in range(min(depth, LIMIT_MAX_INDEX) + 1):
            report = verify_limit(kindj, m, nu, list(LIMIT_KS), config=config)
            final = report.errors[-1]
            ratio = report.ratios[-1]
            converging = report.errors[0] < LIMIT_EXACT or LIMIT_RATIO_RANGE[0] <= ratio <= LIMIT_RATIO_RANGE[1]
            results.append(
                CheckResult(
                    suite=suite,
                    label=f"kind {kindj} m={m} circular limit",
                    params={"nu": nu, "kind": kindj, "m": m, "ks": list(LIMIT_KS)},
                    passed=final < LIMIT_ERROR_BOUND and converging,
                    detail=f"errors {report.errors}, ratio {ratio:.3f}",
                    margin=LIMIT_ERROR_BOUND - final,
                )
            )
    return results


CELL_CHECKS: dict[str, Callable[[str, float, float, int, SolverConfig], list[CheckResult]]] = {
    "c1": _comparison("C1"),
    "c2": _comparison("C2"),
    "c3": _comparison("C3"),
    "z1": _z1,
    "z2": _z2,
    "recessive": _recessive,
}


def run_suite(
    name: SuiteName,
    nus: Sequence[float] = DEFAULT_NUS,
    ks: Sequence[float] = DEFAULT_KS,
    depth: int = DEFAULT_DEPTH,
    config: SolverConfig = DEFAULT_CONFIG,
) -> SuiteReport:
    """Run one verification suite over the (nu, k) grid.

    The limit suite ignores `ks` and uses its own decreasing pair of small moduli.

    Raises:
        DomainError: For an unknown suite name.
    """
    if name not in SUITE_NAMES:
        msg = f"unknown suite {name!r}; expected one of {', '.join(SUITE_NAMES)}"
        raise DomainError(msg)
    checks: list[CheckResult] = []
    if name == "limit":
        for nu in nus:
            checks += _limit(name, nu, depth, config)
    else:
        for nu in nus:
            for k in ks:
                logger.debug("Suite %s: nu=%r k=%r", name, nu, k)
                checks += CELL_CHECKS[name](name, nu, k, depth, config)
        if name == "z2":
            for k in ks:
                checks += _closed_disk(name, k, config)
    report = SuiteReport(name=name, checks=checks)
    logger.info("Suite %s: %d checks, %d failed, %d skipped", name, len(checks), len(report.failures), len(report.skipped))
    return report
