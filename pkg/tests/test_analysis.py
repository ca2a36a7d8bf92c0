from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from lamekit.analysis import (
    CheckResult,
    SuiteReport,
    closed_disk_counts,
    count_zeros_segment,
    expected_segment_zeros,
    ode_residual_real_axis,
    ode_residual_segment,
    real_axis_min_modulus,
    recessive_check,
    run_suite,
    verify_comparison,
    verify_limit,
    winding_unit_circle,
)
from lamekit.config import DEFAULT_CONFIG
from lamekit.errors import ConvergenceError, DomainError, WindingRefusedError
from lamekit.special import ell_index, lame_polynomials
from lamekit.wangerin import SeriesEigenfunction, eigenfunction, evaluate_in_strip, evaluate_on_real_axis, evaluate_on_segment


@pytest.mark.parametrize("kindj", [1, 2])
@pytest.mark.parametrize("m", [0, 1, 2, 4])
def test_zero_count_equals_index_for_moderate_nu(params, kindj, m: int) -> None:
    report = count_zeros_segment(eigenfunction(kindj, "SelfAdjoint", m, params))
    assert report.count == m
    assert report.stable
    assert report.locations.shape == (m,)
    assert np.all((report.locations > 0) & (report.locations < params.modulus.bigK))


def test_zero_locations_of_the_free_equation(make_params) -> None:
    p = make_params(0.0, 0.5)
    report = count_zeros_segment(eigenfunction(1, "SelfAdjoint", 2, p))
    assert_allclose(report.locations, [0.4 * p.modulus.bigK, 0.8 * p.modulus.bigK], atol=1e-10)


@pytest.mark.parametrize("m", [0, 2, 4, 5])
def test_zero_count_below_the_first_algebraic_value(make_params, m: int) -> None:
    f = eigenfunction(1, "SelfAdjoint", m, make_params(-4.2, 0.5))
    assert count_zeros_segment(f).count == max(0, m - 3)


def test_zero_count_gives_up_on_a_small_grid(params) -> None:
    f = eigenfunction(1, "SelfAdjoint", 1, params)
    with pytest.raises(ConvergenceError, match="did not stabilize"):
        count_zeros_segment(f, replace(DEFAULT_CONFIG, zero_grid_max=4096))


def test_expected_segment_zeros() -> None:
    assert expected_segment_zeros(2, 0.3) == 2
    assert expected_segment_zeros(2, -1.5) == 1
    assert expected_segment_zeros(5, -4.2) == 2
    assert expected_segment_zeros(1, -2.5) == 0


@pytest.mark.parametrize("kindj", [1, 2])
@pytest.mark.parametrize("m", [0, 1, 3])
def test_winding_equals_the_circular_limit_index(params, kindj, m: int) -> None:
    report = winding_unit_circle(eigenfunction(kindj, "SelfAdjoint", m, params))
    assert report.winding == ell_index(kindj, m, params.nu).ell
    assert report.min_modulus_on_circle > 0


def test_winding_counts_zeros_off_the_segment(make_params) -> None:
    f = eigenfunction(1, "SelfAdjoint", 0, make_params(-4.2, 0.5))
    assert winding_unit_circle(f).winding == 2
    assert count_zeros_segment(f).count == 0


def test_winding_of_a_known_polynomial(params) -> None:
    for power in (0, 1, 3):
        coeffs = np.zeros(power + 3)
        coeffs[power] = 1.0
        f = SeriesEigenfunction(kindj=1, form="SelfAdjoint", params=params.with_h(1.0), coeffs=coeffs)
        assert winding_unit_circle(f).winding == power


def test_winding_is_refused_for_a_zero_on_the_circle(params) -> None:
    f = SeriesEigenfunction(kindj=1, form="SelfAdjoint", params=params.with_h(1.0), coeffs=np.array([1.0, 1.0]))
    with pytest.raises(WindingRefusedError):
        winding_unit_circle(f)


def test_closed_disk_counts_for_degree_one(modulus) -> None:
    assert [closed_disk_counts(s) for s in lame_polynomials(1, modulus)] == [(0, 1), (0, 1), (0, 0)]


def test_closed_disk_counts_are_limited_to_small_degree(modulus) -> None:
    with pytest.raises(DomainError, match="p <= 3"):
        closed_disk_counts(lame_polynomials(4, modulus)[0])


@pytest.mark.parametrize("kindj", [1, 2])
def test_segment_residual(params, kindj) -> None:
    f = eigenfunction(kindj, "SelfAdjoint", 2, params, "Endpoint")
    u = np.linspace(0.2, 1.8, 17) * params.modulus.bigK
    scale = max(1.0, abs(f.h)) * float(np.max(np.abs(evaluate_on_segment(f, u))))
    assert np.max(ode_residual_segment(f, u)) < 1e-6 * scale


@pytest.mark.parametrize("form", ["Plain", "SelfAdjoint"])
@pytest.mark.parametrize("kindj", [1, 2])
def test_real_axis_residual(params, kindj, form) -> None:
    f = eigenfunction(kindj, form, 1, params, "Endpoint")
    x = np.linspace(0.1, 3.9, 11) * params.modulus.bigK
    scale = max(1.0, abs(f.h)) * float(np.max(np.abs(evaluate_on_real_axis(f, x))))
    assert np.max(ode_residual_real_axis(f, x)) < 1e-5 * scale


@pytest.mark.parametrize("form", ["Plain", "SelfAdjoint"])
@pytest.mark.parametrize("kindj", [1, 2])
def test_endpoint_normalized_values_are_continuous_up_to_the_segment(params, kindj, form) -> None:
    f = eigenfunction(kindj, form, 2, params, "Endpoint")
    u = np.array([0.25, 0.6, 1.4]) * params.modulus.bigK
    on_segment = evaluate_on_segment(f, u)
    near = evaluate_in_strip(f, u, np.full_like(u, params.modulus.bigKprime - 1e-6))
    assert_allclose(near, on_segment, atol=1e-4 * float(np.max(np.abs(on_segment))))


def test_eigenfunctions_do_not_vanish_on_the_real_axis(params) -> None:
    for kindj in (1, 2):
        assert real_axis_min_modulus(eigenfunction(kindj, "SelfAdjoint", 1, params)) > 1e-6


@pytest.mark.slow
def test_floquet_eigenvalues_interleave_the_wangerin_spectra() -> None:
    report = verify_comparison("C1", 0.3, 0.5, depth=3)
    assert report.passed, report.failures
    assert report.relations


def test_reflected_spectra_interleave() -> None:
    report = verify_comparison("C2", -2.5, 0.5, depth=4)
    assert report.passed, report.failures


@pytest.mark.parametrize("nu", [-2.7, -2.2, 0.3])
def test_kinds_interleave(nu: float) -> None:
    report = verify_comparison("C3", nu, 0.5, depth=4)
    assert report.passed, report.failures
    assert all(r.margin >= 0 for r in report.relations if r.relation == "<")


def test_comparison_validates_arguments() -> None:
    with pytest.raises(DomainError, match="0 < k < 1"):
        verify_comparison("C2", 0.3, 1.0)
    with pytest.raises(DomainError, match="depth"):
        verify_comparison("C2", 0.3, 0.5, depth=-1)


@pytest.mark.parametrize("kindj", [1, 2])
def test_circular_limit_converges_quadratically(kindj) -> None:
    report = verify_limit(kindj, 1, 0.3, [0.1, 0.05])
    assert report.errors[-1] < 5e-3
    assert 2.5 <= report.ratios[0] <= 6.0


@pytest.mark.parametrize("ks", [[0.05, 0.1], [0.3, 0.1], []])
def test_limit_rejects_bad_moduli(ks: list[float]) -> None:
    with pytest.raises(DomainError, match="strictly decreasing"):
        verify_limit(1, 0, 0.3, ks)


def test_unknown_suite() -> None:
    with pytest.raises(DomainError, match="unknown suite"):
        run_suite("z3")  # type: ignore[arg-type]


def test_zero_count_suite_on_one_cell() -> None:
    report = run_suite("z1", nus=(0.3,), ks=(0.5,), depth=2)
    assert report.passed
    assert len(report.checks) == 6
    assert {c.suite for c in report.checks} == {"z1"}


def test_recessive_suite_reports_terminating_series() -> None:
    report = run_suite("recessive", nus=(-1.5, 0.3), ks=(0.5,), depth=1)
    assert report.passed
    assert any("terminat" in c.detail for c in report.checks)


@pytest.mark.slow
def test_winding_suite_includes_closed_disk_counts() -> None:
    report = run_suite("z2", nus=(0.3,), ks=(0.5,), depth=2)
    assert report.passed
    assert sum("closed-disk" in c.label for c in report.checks) == 3 + 5 + 7


def test_recessive_check_reads_the_stored_coefficients(params) -> None:
    f = eigenfunction(1, "SelfAdjoint", 2, params, truncation=150)
    assert f.coeffs.size == 151
    assert recessive_check(f).passed
    shifted = recessive_check(replace(f, params=f.params.with_h(f.h + 1e-4)))
    assert not shifted.passed
    assert "recursion residual" in shifted.detail
    coeffs = f.coeffs.copy()
    coeffs[40:] = coeffs[40] * 0.2 ** np.arange(coeffs.size - 40)
    wrong_tail = recessive_check(replace(f, coeffs=coeffs))
    assert not wrong_tail.passed
    assert wrong_tail.margin is not None
    assert wrong_tail.margin < 0


def test_skipped_checks_neither_pass_nor_fail() -> None:
    ok = CheckResult(suite="z2", label="a", params={}, passed=True)
    undecided = CheckResult(suite="z2", label="b", params={}, passed=False, skipped=True)
    bad = CheckResult(suite="z2", label="c", params={}, passed=False)
    assert SuiteReport(name="z2", checks=[ok, undecided]).passed
    report = SuiteReport(name="z2", checks=[ok, undecided, bad])
    assert not report.passed
    assert report.failures == [bad]
    assert report.skipped == [undecided]


def test_excluded_windings_are_reported_as_skipped() -> None:
    report = run_suite("z2", nus=(-2.0,), ks=(0.5,), depth=0)
    assert [(c.params["kind"], c.params["m"]) for c in report.skipped] == [(1, 0), (2, 0)]
    assert all(not c.passed and c.detail == "excluded parameter" for c in report.skipped)
    assert report.passed
    assert not report.failures
