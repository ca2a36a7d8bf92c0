"""Symmetric tridiagonal eigensolver and the Lamé operator matrices.

Eigenvalues come from Sturm-sequence bisection, so the index m of every
eigenvalue is certified by a count. Eigenvectors come from inverse iteration
on the decoupled block that carries the eigenvalue.

## Usage

```python
from lamekit.elliptic import modulus_from_k
from lamekit.recurrence import LameParams
from lamekit.spectra import wangerin_eigenvalues

pairs = wangerin_eigenvalues(1, LameParams(nu=-1.5, modulus=modulus_from_k(0.6)), m_max=2)
pairs[0].h  # 0.34
```

## Matrices

- `build_wangerin`: truncation of the self-adjoint Wangerin operators.
- `build_algebraic`: the p x p matrices whose eigenvalues give algebraic Lamé functions.
- `build_lame_polynomial`: the (p+1) x (p+1) and p x p matrices of Lamé polynomials,
  symmetrized by a diagonal similarity whose factors are kept in `scaling`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import LinAlgError, solve_banded

from lamekit.config import DEFAULT_CONFIG, SolverConfig
from lamekit.elliptic import Modulus
from lamekit.errors import ConvergenceError, DomainError
from lamekit.recurrence import LameParams, rows

logger = logging.getLogger(__name__)

Kind = Literal[1, 2]
"""Wangerin kind: 1 for functions even about K+iK', 2 for odd ones."""

BISECTION_MAX_STEPS = 200
INVERSE_STEPS = 3  # inverse-iteration sweeps per shift
RESIDUAL_TOL = 1e-9  # accepted max row defect of (M - h)v, relative to max(1, |h|)
SIGN_THRESHOLD = 1e-12  # entries below this fraction of max|v| are ignored when fixing the sign
EPS = float(np.finfo(float).eps)

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix.

    Attributes:
        diag: Diagonal entries, length N.
        offdiag: Off-diagonal entries, length N - 1.
        symmetrized: Whether the matrix was obtained from a nonsymmetric one by a diagonal similarity.
        scaling: Similarity factors d with c = d * y mapping eigenvectors back, when symmetrized.
    """

    diag: FloatArray
    offdiag: FloatArray
    symmetrized: bool = False
    scaling: FloatArray | None = field(default=None)

    def __post_init__(self) -> None:
        """Validate lengths and finiteness."""
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)
        if diag.ndim != 1 or diag.size == 0 or offdiag.shape != (diag.size - 1,):
            msg = f"inconsistent tridiagonal shapes: diag {diag.shape}, offdiag {offdiag.shape}"
            raise DomainError(msg)
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(offdiag))):
            msg = "tridiagonal entries must be finite"
            raise DomainError(msg)
        if self.scaling is not None:
            scaling = np.asarray(self.scaling, dtype=float)
            if scaling.shape != diag.shape:
                msg = "scaling must have the length of the diagonal"
                raise DomainError(msg)
            object.__setattr__(self, "scaling", scaling)

    @property
    def size(self) -> int:
        """Matrix dimension N."""
        return int(self.diag.size)

    def blocks(self) -> list[tuple[int, int]]:
        """Half-open index ranges of the blocks separated by exact zero couplings."""
        cuts = [int(i) + 1 for i in np.flatnonzero(self.offdiag == 0.0)]
        starts = [0, *cuts]
        stops = [*cuts, self.size]
        return list(zip(starts, stops, strict=True))

    def gershgorin(self) -> tuple[float, float]:
        """Interval containing every eigenvalue."""
        radius = np.zeros(self.size)
        radius[:-1] += np.abs(self.offdiag)
        radius[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))

    def unscale(self, y: ArrayLike) -> FloatArray:
        """Map an eigenvector of the symmetrized matrix back to the original coefficients.

        Raises:
            DomainError: If the matrix carries no similarity factors.
        """
        if self.scaling is None:
            msg = "matrix was not symmetrized by a diagonal similarity; no scaling to undo"
            raise DomainError(msg)
        return self.scaling * np.asarray(y, dtype=float)

    def matvec(self, v: ArrayLike) -> FloatArray:
        """Product M @ v."""
        x = np.asarray(v, dtype=float)
        out = self.diag * x
        out[:-1] += self.offdiag * x[1:]
        out[1:] += self.offdiag * x[:-1]
        return out

    def to_dense(self) -> FloatArray:
        """Dense copy, intended for small matrices in tests."""
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class Eigenpair:
    """One eigenvalue with its eigenvector.

    Attributes:
        index: Position m in the increasing order of eigenvalues.
        h: The eigenvalue.
        vector: Unit eigenvector with its first significant entry positive.
        truncation: Matrix size the pair was computed at.
        residual: Max row defect of (M - h) v.
    """

    index: int
    h: float
    vector: FloatArray
    truncation: int
    residual: float


def sturm_count(M: TridiagonalMatrix, lam: ArrayLike) -> NDArray[np.int64] | int:  # noqa: N803
    """Number of eigenvalues strictly below lam, vectorized over lam.

    Uses the LDL^T pivots q_0 = d_0 - lam, q_i = d_i - lam - e_{i-1}^2 / q_{i-1}.
    A pivot that is exactly zero (or smaller than the safe minimum) is replaced
    by a tiny positive value.
    """
    lams = np.asarray(lam, dtype=float)
    flat = np.atleast_1d(lams)
    e2 = M.offdiag**2
    pivmin = np.finfo(float).tiny * max(1.0, float(np.max(e2, initial=0.0)))
    count = np.zeros(flat.shape, dtype=np.int64)
    q = M.diag[0] - flat
    q = np.where(np.abs(q) < pivmin, pivmin, q)
    count += q < 0.0
    for i in range(1, M.size):
        q = M.diag[i] - flat - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, pivmin, q)
        count += q < 0.0
    if lams.ndim == 0:
        return int(count[0])
    return count.reshape(lams.shape)


def eigenvalues_bisection(M: TridiagonalMatrix, m_max: int, tol: float = DEFAULT_CONFIG.eigen_tol) -> FloatArray:  # noqa: N803
    """Eigenvalues 0..m_max by simultaneous bisection.

    Each eigenvalue is bracketed to width max(tol / 100, 4 eps |h|); the bracket
    of index i keeps count(lo) <= i < count(hi).

    Raises:
        DomainError: If m_max is not in [0, N).
    """
    if not 0 <= m_max < M.size:
        msg = f"m_max must be in [0, {M.size}), got {m_max}"
        raise DomainError(msg)
    lo0, hi0 = M.gershgorin()
    pad = 4.0 * EPS * max(1.0, abs(lo0), abs(hi0)) + 1e-300
    idx = np.arange(m_max + 1)
    lo = np.full(idx.shape, lo0 - pad)
    hi = np.full(idx.shape, hi0 + pad)
    target = tol / 100.0
    for _ in range(BISECTION_MAX_STEPS):
        width = np.maximum(target, 4.0 * EPS * np.maximum(np.abs(lo), np.abs(hi)))
        active = (hi - lo) > width
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        above = np.asarray(sturm_count(M, mid)) > idx
        hi = np.where(active & above, mid, hi)
        lo = np.where(active & ~above, mid, lo)
    return 0.5 * (lo + hi)


def _banded(diag: FloatArray, offdiag: FloatArray, shift: float) -> FloatArray:
    ab = np.zeros((3, diag.size))
    ab[0, 1:] = offdiag
    ab[1] = diag - shift
    ab[2, :-1] = offdiag
    return ab


def _normalize_sign(v: FloatArray) -> FloatArray:
    v = v / np.linalg.norm(v)
    significant = np.flatnonzero(np.abs(v) > SIGN_THRESHOLD * np.max(np.abs(v)))
    if significant.size and v[significant[0]] < 0.0:
        v = -v
    return v


def _inverse_on_block(diag: FloatArray, offdiag: FloatArray, shift: float, h: float) -> tuple[FloatArray, float] | None:
    n = diag.size
    if n == 1:
        return np.ones(1), abs(diag[0] - h)
    x = np.ones(n) / math.sqrt(n)
    ab = _banded(diag, offdiag, shift)
    try:
        for _ in range(INVERSE_STEPS):
            x = solve_banded((1, 1), ab, x)
            norm = np.linalg.norm(x)
            if not np.isfinite(norm) or norm == 0.0:
                return None
            x /= norm
    except (LinAlgError, ValueError):
        return None
    defect = diag * x - h * x
    defect[:-1] += offdiag * x[1:]
    defect[1:] += offdiag * x[:-1]
    return x, float(np.max(np.abs(defect)))


def eigenvector_inverse_iteration(M: TridiagonalMatrix, h: float, config: SolverConfig = DEFAULT_CONFIG) -> FloatArray:  # noqa: N803
    """Unit eigenvector for an eigenvalue h known to about `eigen_tol`.

    Inverse iteration runs separately on each decoupled block; the block with
    the smallest residual keeps its vector and every other block is zeroed. A
    singular or stagnating solve is retried with the shift moved by
    +-1e-12 max(1, |h|).

    Raises:
        ConvergenceError: If no shift reaches the residual tolerance.
    """
    nudge = 1e-12 * max(1.0, abs(h))
    offsets = [0.0, nudge, -nudge, 2.0 * nudge][: config.inverse_iteration_retries + 1]
    limit = RESIDUAL_TOL * max(1.0, abs(h))
    best_residual = math.inf
    for attempt, offset in enumerate(offsets):
        if attempt:
            logger.debug("Inverse iteration retry %d at shift h%+.1e", attempt, offset)
        best: tuple[int, int, FloatArray] | None = None
        for start, stop in M.blocks():
            solved = _inverse_on_block(M.diag[start:stop], M.offdiag[start : stop - 1], h + offset, h)
            if solved is not None and solved[1] < best_residual:
                best_residual = solved[1]
                best = (start, stop, solved[0])
        if best is not None and best_residual <= limit:
            v = np.zeros(M.size)
            v[best[0] : best[1]] = best[2]
            return _normalize_sign(v)
    msg = f"inverse iteration stagnated at h={h!r}: best residual {best_residual:.3e} > {limit:.3e}"
    raise ConvergenceError(msg)


def eigenpairs(M: TridiagonalMatrix, m_max: int, config: SolverConfig = DEFAULT_CONFIG) -> list[Eigenpair]:  # noqa: N803
    """Eigenvalues 0..m_max of M with their eigenvectors."""
    values = eigenvalues_bisection(M, m_max, config.eigen_tol)
    pairs = []
    for index, h in enumerate(values):
        v = eigenvector_inverse_iteration(M, float(h), config)
        residual = float(np.max(np.abs(M.matvec(v) - h * v)))
        pairs.append(Eigenpair(index=index, h=float(h), vector=v, truncation=M.size, residual=residual))
    return pairs


def build_wangerin(kindj: Kind, p: LameParams, N: int) -> TridiagonalMatrix:  # noqa: N803
    """N x N truncation of the self-adjoint Wangerin operator of kind j.

    diag(n) = epsilon_n^(j) and offdiag(n) = delta_{n+1}. At nu = -p - 1/2 the
    coupling delta_p vanishes exactly, splitting the matrix into blocks.
    """
    if N < 2:  # noqa: PLR2004
        msg = f"truncation must be at least 2, got {N}"
        raise DomainError(msg)
    kind = "W1SelfAdjoint" if kindj == 1 else "W2SelfAdjoint"
    _, diag, sup = rows(kind, np.arange(N), p)
    return TridiagonalMatrix(diag=diag, offdiag=sup[:-1])


def wangerin_eigenvalues(
    kindj: Kind,
    p: LameParams,
    m_max: int,
    tol: float | None = None,
    config: SolverConfig = DEFAULT_CONFIG,
) -> list[Eigenpair]:
    """Eigenvalues H_0..H_{m_max} of the Wangerin problem of kind j, with coefficient vectors.

    The truncation starts at N = m_max + 30 and doubles until the requested
    eigenvalues move by less than tol / 10 (or a few ulps of their size).

    Args:
        kindj: Wangerin kind.
        p: Parameters; `h` is ignored.
        m_max: Largest index returned.
        tol: Eigenvalue tolerance, defaults to `config.eigen_tol`.
        config: Solver settings.

    Returns:
        Eigenpairs with vectors in the self-adjoint coefficient space.

    Raises:
        DomainError: For the circular modulus.
        ConvergenceError: If the truncation exceeds `config.max_truncation`.
    """
    if not 0.0 < p.modulus.k < 1.0:
        msg = f"wangerin_eigenvalues needs 0 < k < 1, got k={p.modulus.k!r}"
        raise DomainError(msg)
    tol = config.eigen_tol if tol is None else tol
    local = replace(config, eigen_tol=tol)
    n = m_max + 30
    prev = eigenvalues_bisection(build_wangerin(kindj, p, n), m_max, tol)
    while True:
        n *= 2
        if n > config.max_truncation:
            msg = f"Wangerin eigenvalues did not settle before N={config.max_truncation} (nu={p.nu!r}, k={p.modulus.k!r})"
            raise ConvergenceError(msg)
        matrix = build_wangerin(kindj, p, n)
        cur = eigenvalues_bisection(matrix, m_max, tol)
        drift = float(np.max(np.abs(cur - prev)))
        floor = 16.0 * EPS * max(1.0, float(np.max(np.abs(cur))))
        logger.debug("Wangerin kind %d truncation %d: drift %.3e", kindj, n, drift)
        if drift < max(tol / 10.0, floor):
            break
        prev = cur
    pairs = []
    for index, h in enumerate(cur):
        v = eigenvector_inverse_iteration(matrix, float(h), local)
        residual = float(np.max(np.abs(matrix.matvec(v) - h * v)))
        pairs.append(Eigenpair(index=index, h=float(h), vector=v, truncation=n, residual=residual))
    return pairs


def build_algebraic(j: Kind, p_int: int, m: Modulus) -> TridiagonalMatrix:
    """The p x p matrix whose eigenvalues are the algebraic eigenvalues at nu = -p - 1/2."""
    if p_int < 1:
        msg = f"algebraic matrices need p >= 1, got {p_int}"
        raise DomainError(msg)
    k2 = m.k**2
    n = np.arange(p_int, dtype=float)
    x = 2 * n + 1 - p_int
    diag = 0.5 * k2 * (p_int**2 - 0.25) + (-1) ** j * m.kprime * x + (1 - 0.5 * k2) * (0.25 + x**2)
    n1 = n[1:]
    offdiag = k2 * n1 * (p_int - n1)
    return TridiagonalMatrix(diag=diag, offdiag=offdiag)


def _lame_polynomial_entries(kindj: Kind, p_int: int, k2: float) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Diagonal, sub (n, n-1) and super (n-1, n) entries of the nonsymmetric polynomial matrix."""
    if kindj == 1:
        n = np.arange(p_int + 1, dtype=float)
        diag = 0.5 * k2 * p_int * (p_int + 1) + (1 - 0.5 * k2) * (2 * n - p_int) ** 2
        n1 = n[1:]
        sub = 0.5 * k2 * (p_int + 1 - n1) * (2 * n1 - 1)
        sup = 0.5 * k2 * (2 * p_int + 1 - 2 * n1) * n1
        return diag, sub, sup
    n = np.arange(p_int, dtype=float)
    diag = 0.5 * k2 * p_int * (p_int + 1) + (1 - 0.5 * k2) * (2 * n + 1 - p_int) ** 2
    n1 = n[1:]
    sub = 0.5 * k2 * (p_int - n1) * (2 * n1 + 1)
    sup = 0.5 * k2 * (2 * p_int + 1 - 2 * n1) * n1
    return diag, sub, sup


def build_lame_polynomial(kindj: Kind, p_int: int, m: Modulus) -> TridiagonalMatrix:
    """Symmetrized Lamé polynomial matrix at nu = -p - 1.

    The nonsymmetric matrix has entries (n, n-1) = sub_n and (n-1, n) = sup_n
    with sub_n sup_n >= 0. The similarity d_n = d_{n-1} sqrt(sub_n / sup_n)
    turns it into a symmetric one with off-diagonals sqrt(sub_n sup_n).
    """
    if p_int < 0 or (kindj == 2 and p_int < 1):  # noqa: PLR2004
        msg = f"Lamé polynomials of kind {kindj} need p >= {kindj - 1}, got {p_int}"
        raise DomainError(msg)
    diag, sub, sup = _lame_polynomial_entries(kindj, p_int, m.k**2)
    scaling = np.ones(diag.size)
    for i in range(1, diag.size):
        scaling[i] = scaling[i - 1] * math.sqrt(sub[i - 1] / sup[i - 1]) if sup[i - 1] > 0.0 else scaling[i - 1]
    return TridiagonalMatrix(diag=diag, offdiag=np.sqrt(sub * sup), symmetrized=True, scaling=scaling)


def lame_polynomial_eigenpairs(kindj: Kind, p_int: int, m: Modulus, config: SolverConfig = DEFAULT_CONFIG) -> list[Eigenpair]:
    """All eigenpairs of a Lamé polynomial matrix, vectors mapped back to coefficient space.

    The returned vectors solve the original nonsymmetric system; they have unit
    norm and their first significant entry is positive.
    """
    matrix = build_lame_polynomial(kindj, p_int, m)
    pairs = []
    for pair in eigenpairs(matrix, matrix.size - 1, config):
        c = _normalize_sign(matrix.unscale(pair.vector))
        pairs.append(Eigenpair(index=pair.index, h=pair.h, vector=c, truncation=pair.truncation, residual=pair.residual))
    return pairs
