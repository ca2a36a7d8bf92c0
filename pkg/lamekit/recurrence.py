"""Three-term recursions for the expansion coefficients of Lamé functions.

Six coefficient families are produced, two for Floquet expansions in the
amplitude variable and four for the eta-expansions of Lamé-Wangerin functions.
Each row n relates c_{n-1}, c_n and c_{n+1}:

    sub * c_{n-1} + (diag - h) * c_n + sup * c_{n+1} = 0

`diag` never contains -h, so rows are reusable across spectral scans.

## Families

- `FloquetPlain`: (rho_n, sigma_n, tau_{n+1}), all integers n.
- `FloquetAdjoint`: (tau_n, sigma_n, rho_{n+1}), all integers n.
- `W1Plain`: (alpha_n, beta1_n, gamma_{n+1}), n >= 0.
- `W2Plain`: (alpha_{n+1}, beta2_n, gamma_{n+1}), n >= 0.
- `W1SelfAdjoint`: (delta_n, epsilon1_n, delta_{n+1}), n >= 0.
- `W2SelfAdjoint`: (delta_n, epsilon2_n, delta_{n+1}), n >= 0.

Row 0 of the Wangerin families has no c_{-1} term and reports sub = 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from lamekit.config import DEFAULT_CONFIG
from lamekit.elliptic import Modulus
from lamekit.errors import DomainError, TerminatingSequenceError

logger = logging.getLogger(__name__)

RecurrenceKind = Literal["FloquetPlain", "FloquetAdjoint", "W1Plain", "W1SelfAdjoint", "W2Plain", "W2SelfAdjoint"]
"""Tag selecting one of the six coefficient families.

The Floquet families are indexed by all integers, the Wangerin families by n >= 0.
"""

FLOQUET_KINDS: frozenset[str] = frozenset({"FloquetPlain", "FloquetAdjoint"})
RESCALE_EVERY = 50  # backward-sweep steps between renormalizations
DECOUPLED_ROW_TOL = 1e-10  # relative residual accepted for a row whose sub coefficient vanishes
MIN_SWEEP_LENGTH = 10

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class LameParams:
    """Parameters of one Lamé problem.

    Attributes:
        nu: Degree parameter; the equation depends on it only through nu(nu+1).
        modulus: Elliptic modulus and derived constants.
        mu: Floquet exponent, only used by the Floquet families.
        h: Spectral parameter, when bound.
    """

    nu: float
    modulus: Modulus
    mu: float | None = None
    h: float | None = None

    @property
    def k(self) -> float:
        """Shorthand for the modulus value."""
        return self.modulus.k

    def with_h(self, h: float) -> LameParams:
        """Copy with the spectral parameter bound to h."""
        return replace(self, h=float(h))


@dataclass(frozen=True)
class RecurrenceRow:
    """Coefficients of c_{n-1}, c_n and c_{n+1} in one recursion row (diag excludes -h)."""

    sub: float
    diag: float
    sup: float


def snap_nu(nu: float, tol: float = DEFAULT_CONFIG.snap_tol) -> float:
    """Snap nu onto the nearest multiple of 1/2 when it lies within tol of it.

    The lattice holds integers as well as half-integers, since exact zero
    couplings of the finite blocks appear at both. Values that drifted by
    rounding are moved back onto it.
    """
    nearest = round(2.0 * nu) / 2.0
    if nearest != nu and abs(nu - nearest) < tol:
        logger.debug("Snapping nu=%r to %r", nu, nearest)
        return nearest
    return nu


def _rho(n: FloatArray, mu: float, nu: float, k2: float) -> FloatArray:
    return -0.25 * k2 * (2 * n - 1 + mu + nu) * (2 * n - 2 + mu - nu)


def _sigma(n: FloatArray, mu: float, nu: float, k2: float) -> FloatArray:
    return 0.5 * k2 * nu * (nu + 1) + (1 - 0.5 * k2) * (2 * n + mu) ** 2


def _tau(n: FloatArray, mu: float, nu: float, k2: float) -> FloatArray:
    return -0.25 * k2 * (2 * n + mu + nu) * (2 * n - 1 + mu - nu)


def _alpha(n: FloatArray, nu: float, k2: float) -> FloatArray:
    return -0.5 * k2 * (n + nu) * (2 * n - 1)


def _beta(n: FloatArray, nu: float, k2: float, shift: float) -> FloatArray:
    return 0.5 * k2 * nu * (nu + 1) + (1 - 0.5 * k2) * (2 * n + nu + shift) ** 2


def _delta(n: FloatArray, nu: float, k2: float) -> FloatArray:
    # gamma_n of the plain families has the same form
    return -0.5 * k2 * n * (2 * n + 2 * nu + 1)


def _epsilon(n: FloatArray, nu: float, m: Modulus, sign: float) -> FloatArray:
    k2 = m.k**2
    x = 2 * n + 1.5 + nu
    return 0.5 * k2 * nu * (nu + 1) + sign * m.kprime * x + (1 - 0.5 * k2) * (0.25 + x**2)


def rows(kind: RecurrenceKind, n: ArrayLike, p: LameParams) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Vectorized recursion rows for the indices n.

    Args:
        kind: Coefficient family.
        n: Integer row indices.
        p: Problem parameters; `mu` is required for the Floquet families.

    Returns:
        Arrays (sub, diag, sup) with the shape of n.

    Raises:
        DomainError: If an index is outside the family's range or mu is missing.
    """
    idx = np.asarray(n)
    if not np.issubdtype(idx.dtype, np.integer):
        if not np.all(np.equal(np.mod(idx, 1), 0)):
            msg = "recursion indices must be integers"
            raise DomainError(msg)
        idx = idx.astype(np.int64)
    nn = idx.astype(float)
    nu = snap_nu(p.nu)
    k2 = p.modulus.k ** 2
    if kind in FLOQUET_KINDS:
        if p.mu is None:
            msg = f"{kind} rows need the Floquet exponent mu"
            raise DomainError(msg)
        mu = p.mu
        if kind == "FloquetPlain":
            return _rho(nn, mu, nu, k2), _sigma(nn, mu, nu, k2), _tau(nn + 1, mu, nu, k2)
        return _tau(nn, mu, nu, k2), _sigma(nn, mu, nu, k2), _rho(nn + 1, mu, nu, k2)
    if np.any(idx < 0):
        msg = f"{kind} rows are defined for n >= 0 only"
        raise DomainError(msg)
    if kind == "W1Plain":
        sub, diag, sup = _alpha(nn, nu, k2), _beta(nn, nu, k2, 1.0), _delta(nn + 1, nu, k2)
    elif kind == "W2Plain":
        sub, diag, sup = _alpha(nn + 1, nu, k2), _beta(nn, nu, k2, 2.0), _delta(nn + 1, nu, k2)
    elif kind == "W1SelfAdjoint":
        sub, diag, sup = _delta(nn, nu, k2), _epsilon(nn, nu, p.modulus, -1.0), _delta(nn + 1, nu, k2)
    elif kind == "W2SelfAdjoint":
        sub, diag, sup = _delta(nn, nu, k2), _epsilon(nn, nu, p.modulus, 1.0), _delta(nn + 1, nu, k2)
    else:
        msg = f"unknown recurrence kind {kind!r}"
        raise DomainError(msg)
    sub = np.where(idx == 0, 0.0, sub)
    return sub, diag, sup


def row(kind: RecurrenceKind, n: int, p: LameParams) -> RecurrenceRow:
    """Single recursion row of the given family.

    Examples:
        >>> row("W1SelfAdjoint", 0, LameParams(nu=-1.5, modulus=modulus_from_k(0.6))).diag
        0.34
    """
    sub, diag, sup = rows(kind, np.asarray([n]), p)
    return RecurrenceRow(sub=float(sub[0]), diag=float(diag[0]), sup=float(sup[0]))


def backward_buffer(m: Modulus) -> int:
    """Extra indices swept above N so that eta1^B is below 1e-18."""
    if m.eta1 <= 0.0:
        return 20
    return math.ceil(18.0 / abs(math.log10(m.eta1))) + 20


def minimal_solution(kind: RecurrenceKind, p: LameParams, N: int) -> FloatArray:  # noqa: N803
    """Recessive solution c_0..c_N of the recursion by backward recurrence.

    The sweep starts at N + B with seed (..., 0, 1), is renormalized every
    `RESCALE_EVERY` steps, and the result is scaled to max |c_n| = 1. A row whose
    sub coefficient vanishes exactly decouples the sequence: if the row is
    satisfied by the values above it, the sweep continues with c_{n-1} = 0,
    otherwise the upper segment is discarded and the sweep is reseeded there.

    Args:
        kind: Coefficient family.
        p: Parameters with `h` bound.
        N: Number of returned coefficients minus one.

    Returns:
        Array c_0..c_N.

    Raises:
        DomainError: If h is unbound or N is too small.
    """
    if p.h is None or not math.isfinite(p.h):
        msg = "minimal_solution needs a finite spectral parameter h"
        raise DomainError(msg)
    if N < MIN_SWEEP_LENGTH:
        msg = f"minimal_solution needs N >= {MIN_SWEEP_LENGTH}, got {N}"
        raise DomainError(msg)
    h = p.h
    top = N + backward_buffer(p.modulus)
    sub, diag, sup = rows(kind, np.arange(top + 1), p)
    shifted = diag - h
    c = np.zeros(top + 2)
    c[top] = 1.0
    for n in range(top, 0, -1):
        residual = shifted[n] * c[n] + sup[n] * c[n + 1]
        if sub[n] != 0.0:
            c[n - 1] = -residual / sub[n]
        else:
            scale = max(abs(shifted[n] * c[n]), abs(sup[n] * c[n + 1]), abs(h * c[n]), np.finfo(float).tiny)
            if abs(residual) <= DECOUPLED_ROW_TOL * scale:
                c[n - 1] = 0.0
            else:
                c[n:] = 0.0
                c[n - 1] = 1.0
        if (top - n) % RESCALE_EVERY == 0:
            peak = np.max(np.abs(c[n - 1 :]))
            if peak > 0.0:
                c[n - 1 :] /= peak
    result = c[: N + 1]
    peak = np.max(np.abs(result))
    return result / peak if peak > 0.0 else result


def recessive_ratio(c: ArrayLike, window: int) -> float:
    """Limit of c_{n+1}/c_n estimated from the trailing `window` ratios.

    The recessive solution behaves like r^n n^s (1 + a/n + ...), so the
    consecutive log-ratios are smooth in 1/n. They are fitted by a cubic in
    x = 1/(n+1) and extrapolated to x = 0. For an exactly geometric sequence the
    fit returns r itself.

    Args:
        c: Coefficient sequence c_0..c_N.
        window: Number of trailing consecutive ratios used.

    Returns:
        The estimated ratio.

    Raises:
        TerminatingSequenceError: If the trailing coefficients vanish.
        DomainError: If the sequence is too short or has zeros inside the window.
    """
    seq = np.asarray(c, dtype=float)
    if window < 1 or seq.size < window + 2:
        msg = f"need at least window+2={window + 2} coefficients, got {seq.size}"
        raise DomainError(msg)
    if seq[-1] == 0.0 or seq[-2] == 0.0:
        nonzero = np.flatnonzero(seq)
        raise TerminatingSequenceError(int(nonzero[-1]) if nonzero.size else -1)
    tail = seq[-(window + 1) :]
    if np.any(tail == 0.0):
        msg = "zero coefficient inside the ratio window"
        raise DomainError(msg)
    n = np.arange(seq.size - window - 1, seq.size - 1, dtype=float)
    log_ratio = np.log(np.abs(tail[1:])) - np.log(np.abs(tail[:-1]))
    degree = min(3, window - 1)
    coeffs = np.polynomial.polynomial.polyfit(1.0 / (n + 1.0), log_ratio, degree)
    sign = float(np.sign(tail[-1] * tail[-2]))
    return sign * float(np.exp(coeffs[0]))
