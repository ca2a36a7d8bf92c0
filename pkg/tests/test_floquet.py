import math
from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from lamekit.config import DEFAULT_CONFIG
from lamekit.elliptic import circular_limit
from lamekit.errors import ConvergenceError, DomainError
from lamekit.floquet import (
    canonicalize,
    discriminant,
    floquet_eigenvalues,
    half_period_values,
    integrate_lame,
    scan_floquet_eigenvalues,
)
from lamekit.recurrence import LameParams


def test_canonicalize() -> None:
    mu, nu = canonicalize(2.6, -1.3)
    assert mu == pytest.approx(0.6, abs=1e-15)
    assert nu == pytest.approx(0.3, abs=1e-15)
    assert canonicalize(-0.4, 0.3) == pytest.approx((0.4, 0.3))
    assert canonicalize(3.0, 1.0) == (1.0, 1.0)


def test_wronskian_is_preserved(params) -> None:
    for h in (0.5, 3.0, 17.0):
        assert integrate_lame(h, params).wronskian == pytest.approx(1.0, abs=1e-9)


def test_loose_integration_is_rejected_by_the_wronskian(params) -> None:
    loose = replace(DEFAULT_CONFIG, ode_rtol=1e-3, ode_atol=1e-3)
    with pytest.raises(ConvergenceError, match="Wronskian defect"):
        integrate_lame(60.0, params, loose)


def test_free_equation_discriminant(make_params) -> None:
    p = make_params(0.0, 0.5)
    for h in (0.3, 2.0, 9.0):
        assert discriminant(h, p) == pytest.approx(2 * math.cos(2 * p.modulus.bigK * math.sqrt(h)), abs=1e-9)


def test_discriminant_is_invariant_under_nu_reflection(make_params) -> None:
    rng = np.random.default_rng(3)
    for h in rng.uniform(-1.0, 20.0, size=5):
        assert discriminant(h, make_params(0.3, 0.5)) == pytest.approx(discriminant(h, make_params(-1.3, 0.5)), abs=1e-10)


def test_half_period_values_factor_the_discriminant(params) -> None:
    hs = np.array([0.7, 4.2])
    half = half_period_values(hs, params)
    full = np.array([discriminant(h, params) for h in hs])
    assert_allclose(half.discriminant, full, atol=1e-9)
    assert_allclose(full - 2, 4 * half.dw1 * half.w2, atol=1e-9)
    assert_allclose(full + 2, 4 * half.w1 * half.dw2, atol=1e-9)


def test_near_circular_eigenvalues(make_params) -> None:
    h = floquet_eigenvalues(0.4, make_params(0.3, 1e-4), 3)
    assert_allclose(h, [0.16, 2.56, 5.76, 12.96], atol=1e-3)


@pytest.mark.slow
def test_floquet_eigenvalues_solve_the_discriminant_equation(params) -> None:
    mu = 0.4
    h = floquet_eigenvalues(mu, params, 4)
    assert np.all(np.diff(h) > 0)
    for value in h:
        assert discriminant(value, params) == pytest.approx(2 * math.cos(mu * math.pi), abs=1e-8)


@pytest.mark.slow
def test_mu_symmetries(params) -> None:
    base = floquet_eigenvalues(0.4, params, 3)
    assert_allclose(floquet_eigenvalues(-0.4, params, 3), base, atol=1e-8)
    assert_allclose(floquet_eigenvalues(2.4, params, 3), base, atol=1e-8)
    assert_allclose(floquet_eigenvalues(1.6, params, 3), base, atol=1e-8)


@pytest.mark.slow
def test_lame_polynomials_of_degree_one_are_floquet_solutions(make_params) -> None:
    k = 0.5
    p = make_params(1.0, k)
    assert floquet_eigenvalues(0.0, p, 0)[0] == pytest.approx(k**2, abs=1e-9)
    assert_allclose(floquet_eigenvalues(1.0, p, 1), [1.0, 1.0 + k**2], atol=1e-9)


@pytest.mark.slow
def test_scan_agrees_with_homotopy(params) -> None:
    assert_allclose(scan_floquet_eigenvalues(0.7, params, 3), floquet_eigenvalues(0.7, params, 3), atol=1e-8)


def test_floquet_eigenvalues_validate_arguments(params) -> None:
    with pytest.raises(DomainError, match="m_max"):
        floquet_eigenvalues(0.4, params, -1)
    with pytest.raises(DomainError):
        floquet_eigenvalues(0.4, LameParams(nu=0.3, modulus=circular_limit()), 2)
