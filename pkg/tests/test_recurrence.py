import numpy as np
import pytest
from numpy.testing import assert_allclose

from lamekit.elliptic import modulus_from_k
from lamekit.errors import DomainError, TerminatingSequenceError
from lamekit.recurrence import LameParams, backward_buffer, minimal_solution, recessive_ratio, row, rows, snap_nu
from lamekit.spectra import wangerin_eigenvalues


def test_first_self_adjoint_row_gives_the_algebraic_eigenvalue() -> None:
    p = LameParams(nu=-1.5, modulus=modulus_from_k(0.6))
    r = row("W1SelfAdjoint", 0, p)
    assert r.diag == pytest.approx(0.34, abs=1e-15)
    assert r.sub == 0.0
    assert r.sup == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("kind", ["W1Plain", "W2Plain", "W1SelfAdjoint", "W2SelfAdjoint"])
def test_wangerin_rows_start_without_sub_term(params, kind) -> None:
    sub, diag, sup = rows(kind, np.arange(6), params)
    assert sub[0] == 0.0
    assert diag.shape == sup.shape == (6,)


def test_self_adjoint_rows_are_symmetric(params) -> None:
    n = np.arange(20)
    sub, _, sup = rows("W2SelfAdjoint", n, params)
    assert_allclose(sub[1:], sup[:-1], rtol=1e-15)


def test_adjoint_floquet_rows_transpose_the_plain_ones(modulus) -> None:
    p = LameParams(nu=0.3, modulus=modulus, mu=0.4)
    n = np.arange(-5, 6)
    plain_sub, plain_diag, plain_sup = rows("FloquetPlain", n, p)
    adj_sub, adj_diag, adj_sup = rows("FloquetAdjoint", n, p)
    assert_allclose(adj_diag, plain_diag)
    assert_allclose(adj_sub[1:], plain_sup[:-1])
    assert_allclose(adj_sup[:-1], plain_sub[1:])


def test_rows_validate_their_arguments(params) -> None:
    with pytest.raises(DomainError, match="n >= 0"):
        rows("W1Plain", np.array([-1, 0]), params)
    with pytest.raises(DomainError, match="mu"):
        rows("FloquetPlain", np.arange(3), params)
    with pytest.raises(DomainError, match="integers"):
        rows("W1Plain", np.array([0.5]), params)


def test_snap_nu() -> None:
    assert snap_nu(-2.5 + 1e-14) == -2.5
    assert snap_nu(0.3) == 0.3
    assert snap_nu(-2.5 + 1e-6) == -2.5 + 1e-6
    assert snap_nu(-3.0 - 1e-14) == -3.0
    assert snap_nu(1.0 + 1e-14) == 1.0


def test_backward_buffer_grows_with_k() -> None:
    assert backward_buffer(modulus_from_k(0.9)) > backward_buffer(modulus_from_k(0.1))


@pytest.mark.parametrize("m", [0, 2, 4])
def test_minimal_solution_matches_the_eigenvector(params, m: int) -> None:
    pair = wangerin_eigenvalues(1, params, m)[m]
    c = minimal_solution("W1SelfAdjoint", params.with_h(pair.h), 60)
    c = c / np.linalg.norm(c)
    v = pair.vector[:61] / np.linalg.norm(pair.vector[:61])
    if np.dot(c, v) < 0:
        c = -c
    assert_allclose(c[:20], v[:20], atol=1e-8)


def test_minimal_solution_requires_h(params) -> None:
    with pytest.raises(DomainError, match="spectral parameter"):
        minimal_solution("W1SelfAdjoint", params, 50)


def test_recessive_ratio_of_a_geometric_sequence() -> None:
    c = 0.3 ** np.arange(80)
    assert recessive_ratio(c, 40) == pytest.approx(0.3, rel=1e-12)
    assert recessive_ratio(c * (-1.0) ** np.arange(80), 40) == pytest.approx(-0.3, rel=1e-12)


def test_recessive_ratio_removes_the_algebraic_prefactor() -> None:
    n = np.arange(1, 121, dtype=float)
    c = 0.2**n * n**2.5
    assert recessive_ratio(c, 60) == pytest.approx(0.2, rel=1e-6)


def test_recessive_ratio_reports_termination() -> None:
    with pytest.raises(TerminatingSequenceError) as info:
        recessive_ratio([1.0, 2.0, 0.5, 0.0, 0.0], 2)
    assert info.value.last_nonzero == 2


@pytest.mark.parametrize("k", [0.3, 0.5, 0.8])
def test_eigenfunction_coefficients_decay_like_eta1(make_params, k: float) -> None:
    p = make_params(0.3, k)
    pair = wangerin_eigenvalues(2, p, 3)[3]
    eta1 = p.modulus.eta1
    n = min(200, int(200 / abs(np.log10(eta1))))
    c = minimal_solution("W2SelfAdjoint", p.with_h(pair.h), n)
    assert recessive_ratio(c, n // 2) == pytest.approx(eta1, abs=1e-6)
