import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import eigh_tridiagonal

from lamekit.elliptic import circular_limit, modulus_from_k
from lamekit.errors import DomainError
from lamekit.recurrence import LameParams
from lamekit.spectra import (
    TridiagonalMatrix,
    build_algebraic,
    build_wangerin,
    build_lame_polynomial,
    eigenpairs,
    eigenvalues_bisection,
    eigenvector_inverse_iteration,
    lame_polynomial_eigenpairs,
    sturm_count,
    wangerin_eigenvalues,
)


@pytest.fixture
def random_matrix() -> TridiagonalMatrix:
    rng = np.random.default_rng(7)
    return TridiagonalMatrix(diag=rng.normal(size=40), offdiag=rng.normal(size=39))


def test_sturm_count_matches_dense_eigenvalues(random_matrix) -> None:
    reference = eigh_tridiagonal(random_matrix.diag, random_matrix.offdiag, eigvals_only=True)
    probes = np.linspace(-5.0, 5.0, 23)
    counts = sturm_count(random_matrix, probes)
    assert list(counts) == [int(np.sum(reference < lam)) for lam in probes]
    assert isinstance(sturm_count(random_matrix, 0.0), int)


def test_bisection_matches_scipy(random_matrix) -> None:
    reference = eigh_tridiagonal(random_matrix.diag, random_matrix.offdiag, eigvals_only=True)
    assert_allclose(eigenvalues_bisection(random_matrix, 15), reference[:16], atol=1e-11)


def test_bisection_rejects_too_many_eigenvalues(random_matrix) -> None:
    with pytest.raises(DomainError, match="m_max"):
        eigenvalues_bisection(random_matrix, 40)


def test_inverse_iteration_residual(random_matrix) -> None:
    h = float(eigenvalues_bisection(random_matrix, 5)[5])
    v = eigenvector_inverse_iteration(random_matrix, h)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    assert np.max(np.abs(random_matrix.matvec(v) - h * v)) < 1e-10


def test_blocks_and_degenerate_eigenvalues() -> None:
    matrix = TridiagonalMatrix(diag=np.array([1.0, 1.0, 1.0, 1.0]), offdiag=np.array([1.0, 0.0, 1.0]))
    assert matrix.blocks() == [(0, 2), (2, 4)]
    pairs = eigenpairs(matrix, 3)
    assert_allclose([p.h for p in pairs], [0.0, 0.0, 2.0, 2.0], atol=1e-12)
    for pair in pairs:
        assert pair.residual < 1e-10
    assert_allclose(matrix.to_dense() @ pairs[2].vector, 2.0 * pairs[2].vector, atol=1e-10)


def test_matrix_validation() -> None:
    with pytest.raises(DomainError, match="shapes"):
        TridiagonalMatrix(diag=np.ones(3), offdiag=np.ones(3))
    with pytest.raises(DomainError, match="finite"):
        TridiagonalMatrix(diag=np.array([1.0, math.nan]), offdiag=np.ones(1))


@pytest.mark.parametrize("k", [0.2, 0.5, 0.8])
def test_algebraic_closed_forms(k: float) -> None:
    m = modulus_from_k(k)
    for kindj in (1, 2):
        h = wangerin_eigenvalues(kindj, LameParams(nu=-1.5, modulus=m), 0)[0].h
        assert h == pytest.approx(0.25 * (1 + k**2), abs=1e-10)
        pair = [p.h for p in wangerin_eigenvalues(kindj, LameParams(nu=-2.5, modulus=m), 1)]
        root = math.sqrt(1 - k**2 + k**4)
        assert_allclose(pair, [1.25 * (1 + k**2) - root, 1.25 * (1 + k**2) + root], atol=1e-10)


@pytest.mark.parametrize("k", [0.3, 0.7])
def test_free_equation_spectrum(k: float) -> None:
    p = LameParams(nu=0.0, modulus=modulus_from_k(k))
    scale = math.pi / (2 * p.modulus.bigK)
    first = [pair.h for pair in wangerin_eigenvalues(1, p, 5)]
    second = [pair.h for pair in wangerin_eigenvalues(2, p, 5)]
    m = np.arange(6)
    assert_allclose(first, ((2 * m + 1) * scale) ** 2, rtol=1e-9)
    assert_allclose(second, ((2 * m + 2) * scale) ** 2, rtol=1e-9)


def test_wangerin_eigenvalues_need_a_proper_modulus() -> None:
    with pytest.raises(DomainError, match="0 < k < 1"):
        wangerin_eigenvalues(1, LameParams(nu=0.3, modulus=circular_limit()), 2)


def test_wangerin_pairs_are_increasing_with_small_residuals(params) -> None:
    pairs = wangerin_eigenvalues(1, params, 6)
    assert [p.index for p in pairs] == list(range(7))
    assert np.all(np.diff([p.h for p in pairs]) > 0)
    assert all(p.residual < 1e-9 for p in pairs)


@pytest.mark.parametrize("p_int", [1, 2, 3, 4])
def test_algebraic_matrix_is_shared_by_both_kinds(modulus, p_int: int) -> None:
    one = eigenvalues_bisection(build_algebraic(1, p_int, modulus), p_int - 1)
    two = eigenvalues_bisection(build_algebraic(2, p_int, modulus), p_int - 1)
    assert_allclose(one, two, atol=1e-12)
    params = LameParams(nu=-p_int - 0.5, modulus=modulus)
    assert_allclose([p.h for p in wangerin_eigenvalues(1, params, p_int - 1)], one, atol=1e-10)


def test_algebraic_matrix_rejects_p_zero(modulus) -> None:
    with pytest.raises(DomainError, match="p >= 1"):
        build_algebraic(1, 0, modulus)


def test_lame_polynomial_eigenvalues_p1(modulus) -> None:
    k2 = modulus.k**2
    assert_allclose([p.h for p in lame_polynomial_eigenpairs(1, 1, modulus)], [1.0, 1.0 + k2], atol=1e-12)
    assert_allclose([p.h for p in lame_polynomial_eigenpairs(2, 1, modulus)], [k2], atol=1e-12)


@pytest.mark.parametrize("kindj", [1, 2])
def test_lame_polynomial_vectors_are_symmetric_or_antisymmetric(modulus, kindj) -> None:
    for pair in lame_polynomial_eigenpairs(kindj, 2, modulus):
        c = pair.vector
        assert min(np.linalg.norm(c - c[::-1]), np.linalg.norm(c + c[::-1])) < 1e-9


def test_lame_polynomial_symmetrization_keeps_the_spectrum(modulus) -> None:
    matrix = build_lame_polynomial(1, 3, modulus)
    assert matrix.symmetrized
    dense = np.diag(matrix.diag) + np.diag(matrix.offdiag, 1) + np.diag(matrix.offdiag, -1)
    assert_allclose(np.linalg.eigvalsh(dense), eigenvalues_bisection(matrix, 3), atol=1e-12)


def test_unscale_needs_similarity_factors(modulus) -> None:
    matrix = build_lame_polynomial(1, 3, modulus)
    assert_allclose(matrix.unscale(np.ones(matrix.size)), matrix.scaling)
    plain = TridiagonalMatrix(diag=np.ones(3), offdiag=np.ones(2))
    with pytest.raises(DomainError, match="no scaling"):
        plain.unscale(np.ones(3))


def test_wangerin_matrix_splits_at_half_integer_nu(modulus) -> None:
    matrix = build_wangerin(1, LameParams(nu=-2.5, modulus=modulus), 40)
    assert matrix.size == 40
    assert matrix.offdiag[1] == 0.0
    assert matrix.blocks()[0] == (0, 2)
    with pytest.raises(DomainError, match="at least 2"):
        build_wangerin(1, LameParams(nu=0.3, modulus=modulus), 1)
