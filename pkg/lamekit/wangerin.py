"""Lamé-Wangerin eigenfunctions as eta-series and their evaluation.

With zeta = sn z - i cn z and eta = zeta^2, an eigenfunction of kind j is one of

- Plain, kind 1:        zeta^(nu+1) * sum c_n eta^n
- Plain, kind 2:        (2i/k) zeta^(nu+2) dn z * sum d_n eta^n
- SelfAdjoint, kind j:  zeta^(nu+3/2) J_j(z) * sum a_n eta^n

The forms are tied together by c = (1-k')^(1/2) (eta2 - eta)^(1/2) a and
d = (1+k')^(1/2) (eta2 - eta)^(-1/2) a, so all forms of one eigenfunction take
the same values. On the segment z = u + iK' (0 < u < K) every prefactor is
real and positive, and the function continues evenly (kind 1) or oddly
(kind 2) about u = K.

## Usage

```python
from lamekit.elliptic import modulus_from_k
from lamekit.recurrence import LameParams
from lamekit.wangerin import eigenfunction, evaluate_on_segment

f = eigenfunction(1, "Plain", 2, LameParams(nu=0.3, modulus=modulus_from_k(0.5)), "Endpoint")
evaluate_on_segment(f, f.params.modulus.bigK)  # 1.0
```
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import binom

from lamekit.config import DEFAULT_CONFIG, SolverConfig
from lamekit.elliptic import Modulus, eta_on_segment, jacobi_complex, zeta_log
from lamekit.errors import DomainError
from lamekit.recurrence import LameParams, RecurrenceKind, minimal_solution, rows
from lamekit.spectra import Kind, wangerin_eigenvalues

logger = logging.getLogger(__name__)

Form = Literal["Plain", "SelfAdjoint"]
"""Expansion form of the coefficient series."""

Normalization = Literal["UnitCoeff", "Endpoint"]
"""UnitCoeff: unit Euclidean coefficient norm, first significant coefficient positive.

Endpoint: w(K+iK') = 1 for kind 1, dw/du(K) = 1 for kind 2.
"""

SPLICE_LEVEL = 1e-6  # eigenvector entries below this fraction of the peak are replaced by the recessive tail
SIGN_THRESHOLD = 1e-12
TRUNCATION_DIGITS = 40.0  # eta1^(N - m) falls below 10^-TRUNCATION_DIGITS
MIN_TAIL = 30

FloatArray = NDArray[np.float64]
ComplexArray = NDArray[np.complex128]


@dataclass(frozen=True)
class SeriesEigenfunction:
    """A Lamé-Wangerin eigenfunction stored by its eta-expansion coefficients.

    Attributes:
        kindj: 1 for even about K+iK', 2 for odd.
        form: Which expansion the coefficients belong to.
        params: Parameters with h bound to the eigenvalue.
        coeffs: c_n or d_n (Plain) or a_n (SelfAdjoint).
        normalization: Normalization applied to the coefficients.
        m: Eigenvalue index, when the function came from the Wangerin spectrum.
    """

    kindj: Kind
    form: Form
    params: LameParams
    coeffs: FloatArray
    normalization: Normalization = "UnitCoeff"
    m: int | None = None

    @property
    def h(self) -> float:
        """The eigenvalue."""
        if self.params.h is None:
            msg = "series eigenfunction without a bound eigenvalue"
            raise DomainError(msg)
        return self.params.h

    @property
    def terminating(self) -> bool:
        """Whether the coefficient series has finite support within the stored truncation."""
        return bool(self.coeffs[-1] == 0.0 and self.coeffs[-2] == 0.0)

    @property
    def recurrence_kind(self) -> RecurrenceKind:
        """Recursion family satisfied by the coefficients."""
        if self.form == "Plain":
            return "W1Plain" if self.kindj == 1 else "W2Plain"
        return "W1SelfAdjoint" if self.kindj == 1 else "W2SelfAdjoint"

    def recursion_residual(self) -> float:
        """Max defect of the recursion rows 0..N-1, relative to max |coeff|."""
        c = self.coeffs
        n = c.size - 1
        sub, diag, sup = rows(self.recurrence_kind, np.arange(n), self.params)
        lower = np.concatenate([[0.0], c[: n - 1]])
        defect = sub * lower + (diag - self.h) * c[:n] + sup * c[1 : n + 1]
        return float(np.max(np.abs(defect)) / np.max(np.abs(c)))


@dataclass(frozen=True)
class ContinuationKernels:
    """The square-root kernels at one point of the strip.

    Attributes:
        I1: Branch of (dn z + cn z)^(1/2) with I1(z + 4K) = -I1(z).
        I2: -I1(z + 2K), a branch of (dn z - cn z)^(1/2).
        J1: (e^(i pi/4) I1 + e^(-i pi/4) I2) / (1 - k')^(1/2).
        J2: (e^(i pi/4) I1 - e^(-i pi/4) I2) / (1 + k')^(1/2).
    """

    I1: Any  # noqa: N815
    I2: Any  # noqa: N815
    J1: Any  # noqa: N815
    J2: Any  # noqa: N815


def _i1(x: FloatArray, y: FloatArray, m: Modulus) -> ComplexArray:
    """I1 with Re z reduced to [-2K, 2K) and the sign of each 4K shift applied."""
    quarter = 4.0 * m.bigK
    shifts = np.floor((x + 2.0 * m.bigK) / quarter)
    x0 = x - shifts * quarter
    triple = jacobi_complex(x0, y, m)
    v = np.asarray(np.asarray(triple.dn) + np.asarray(triple.cn), dtype=complex)
    root = np.sqrt(v)
    # on the cut Re z = -2K the value is the limit from inside the strip
    on_cut = np.isclose(x0, -2.0 * m.bigK, rtol=0.0, atol=1e-15 * m.bigK)
    root = np.where(on_cut, 1j * np.sqrt(np.abs(v)), root)
    return np.where(np.mod(shifts, 2.0) == 0.0, root, -root)


def kernels(x: ArrayLike, y: ArrayLike, m: Modulus) -> ContinuationKernels:
    """Evaluate I1, I2, J1, J2 at z = x + iy with 0 <= y < K'.

    Raises:
        DomainError: If y is outside [0, K').
    """
    xs, ys = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    i1 = _i1(xs, ys, m)
    i2 = -_i1(xs + 2.0 * m.bigK, ys, m)
    plus, minus = np.exp(0.25j * math.pi), np.exp(-0.25j * math.pi)
    j1 = (plus * i1 + minus * i2) / math.sqrt(1.0 - m.kprime)
    j2 = (plus * i1 - minus * i2) / math.sqrt(1.0 + m.kprime)
    return ContinuationKernels(I1=i1[()], I2=i2[()], J1=j1[()], J2=j2[()])


def series_value(f: SeriesEigenfunction, eta: ArrayLike) -> Any:
    """The coefficient series sum coeff_n eta^n at real or complex eta."""
    return np.polynomial.polynomial.polyval(np.asarray(eta), f.coeffs)[()]


def _sqrt_binomial_series(eta2: float, power: float, n: int) -> FloatArray:
    """Taylor coefficients of (eta2 - eta)^power up to eta^n."""
    j = np.arange(n + 1, dtype=float)
    return eta2**power * binom(power, j) * (-1.0 / eta2) ** j


def _convolve(a: FloatArray, b: FloatArray) -> FloatArray:
    return np.convolve(a, b)[: a.size]


def _normalize(f: SeriesEigenfunction, normalization: Normalization) -> SeriesEigenfunction:
    c = f.coeffs
    if normalization == "UnitCoeff":
        c = c / np.linalg.norm(c)
        significant = np.flatnonzero(np.abs(c) > SIGN_THRESHOLD * np.max(np.abs(c)))
        if c[significant[0]] < 0.0:
            c = -c
        return replace(f, coeffs=c, normalization="UnitCoeff")
    scale = endpoint_value(f)
    if scale == 0.0 or not math.isfinite(scale):
        msg = f"cannot apply endpoint normalization: endpoint quantity is {scale!r}"
        raise DomainError(msg)
    return replace(f, coeffs=c / scale, normalization="Endpoint")


def to_plain(f: SeriesEigenfunction) -> SeriesEigenfunction:
    """Same eigenfunction with coefficients of the Plain expansion.

    Function values are unchanged, so a UnitCoeff label keeps referring to the
    coefficients the function was normalized in.
    """
    if f.form == "Plain":
        return f
    m = f.params.modulus
    n = f.coeffs.size - 1
    if f.kindj == 1:
        c = _convolve(f.coeffs, _sqrt_binomial_series(m.eta2, 0.5, n))
    else:
        c = _convolve(f.coeffs, _sqrt_binomial_series(m.eta2, -0.5, n))
    return replace(f, form="Plain", coeffs=c)


def to_self_adjoint(f: SeriesEigenfunction) -> SeriesEigenfunction:
    """Same eigenfunction with coefficients of the SelfAdjoint expansion."""
    if f.form == "SelfAdjoint":
        return f
    m = f.params.modulus
    n = f.coeffs.size - 1
    if f.kindj == 1:
        a = _convolve(f.coeffs, _sqrt_binomial_series(m.eta2, -0.5, n))
    else:
        a = _convolve(f.coeffs, _sqrt_binomial_series(m.eta2, 0.5, n))
    return replace(f, form="SelfAdjoint", coeffs=a)


def _segment_prefactor(f: SeriesEigenfunction, eta: Any) -> Any:
    """Real prefactor multiplying the series on the left half (0, K] of the segment."""
    m = f.params.modulus
    nu = f.params.nu
    base = eta ** ((nu + 1.0) / 2.0)
    gap1 = np.sqrt(np.maximum(m.eta1 - eta, 0.0))
    gap2 = np.sqrt(m.eta2 - eta)
    if f.form == "Plain":
        return base if f.kindj == 1 else base * gap1 * gap2
    if f.kindj == 1:
        return base * gap2
    return base * gap1


def endpoint_value(f: SeriesEigenfunction) -> float:
    """w(K+iK') for kind 1, dw/du at u = K for kind 2."""
    m = f.params.modulus
    eta1 = m.eta1
    total = float(series_value(f, eta1))
    if f.kindj == 1:
        return float(_segment_prefactor(f, eta1)) * total
    # (eta1 - eta)^(1/2) ~ (K - u) k sqrt(k') / (1 + k') near u = K
    slope = m.k * math.sqrt(m.kprime) / (1.0 + m.kprime)
    base = eta1 ** ((f.params.nu + 1.0) / 2.0)
    if f.form == "Plain":
        return -base * slope * math.sqrt(m.eta2 - eta1) * total
    return -base * slope * total


def evaluate_on_segment(f: SeriesEigenfunction, u: ArrayLike) -> Any:
    """Real value of w at z = u + iK' for 0 < u < 2K.

    Raises:
        DomainError: If u is not strictly inside (0, 2K).
    """
    us = np.asarray(u, dtype=float)
    two_k = 2.0 * f.params.modulus.bigK
    if np.any(us <= 0.0) or np.any(us >= two_k):
        msg = f"segment evaluation needs 0 < u < 2K={two_k!r}"
        raise DomainError(msg)
    mirrored = us > f.params.modulus.bigK
    left = np.where(mirrored, two_k - us, us)
    eta = np.asarray(eta_on_segment(left, f.params.modulus))
    value = _segment_prefactor(f, eta) * np.polynomial.polynomial.polyval(eta, f.coeffs)
    if f.kindj == 2:  # noqa: PLR2004
        value = np.where(mirrored, -value, value)
    return np.asarray(value)[()]


def evaluate_in_strip(f: SeriesEigenfunction, x: ArrayLike, y: ArrayLike) -> Any:
    """Complex value of w at z = x + iy with 0 <= y < K'.

    Raises:
        DomainError: If y is outside [0, K').
    """
    m = f.params.modulus
    nu = f.params.nu
    xs, ys = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    log_zeta = np.asarray(zeta_log(xs, ys, m))
    eta = np.exp(2.0 * log_zeta)
    total = np.polynomial.polynomial.polyval(eta, f.coeffs)
    if f.form == "Plain":
        if f.kindj == 1:
            return (np.exp((nu + 1.0) * log_zeta) * total)[()]
        dn = np.asarray(jacobi_complex(xs, ys, m).dn)
        return ((2j / m.k) * np.exp((nu + 2.0) * log_zeta) * dn * total)[()]
    kern = kernels(xs, ys, m)
    j = np.asarray(kern.J1 if f.kindj == 1 else kern.J2)
    return (np.exp((nu + 1.5) * log_zeta) * j * total)[()]


def evaluate_on_real_axis(f: SeriesEigenfunction, x: ArrayLike) -> Any:
    """Complex value of w on the real axis."""
    return evaluate_in_strip(f, x, np.zeros_like(np.asarray(x, dtype=float)))


def eigenfunction_truncation(m_index: int, modulus: Modulus) -> int:
    """Number of stored coefficients minus one for the eigenfunction of index m."""
    extra = math.ceil(TRUNCATION_DIGITS / abs(math.log10(modulus.eta1)))
    return max(m_index + MIN_TAIL, m_index + extra)


def _splice_tail(a: FloatArray, kindj: Kind, p: LameParams, n: int) -> FloatArray:
    """Replace the small entries of a truncated eigenvector by the recessive solution."""
    kind: RecurrenceKind = "W1SelfAdjoint" if kindj == 1 else "W2SelfAdjoint"
    tail = minimal_solution(kind, p, n)
    out = np.zeros(n + 1)
    top = min(a.size, n + 1)
    out[:top] = a[:top]
    peak_at = int(np.argmax(np.abs(a)))
    small = (np.abs(out[:top]) < SPLICE_LEVEL * abs(a[peak_at])) & (tail[:top] != 0.0) & (out[:top] != 0.0)
    small[: peak_at + 1] = False
    candidates = np.flatnonzero(small)
    start = int(candidates[0]) if candidates.size else top - 1
    if tail[start] == 0.0 or out[start] == 0.0:
        return out
    out[start:] = tail[start:] * (out[start] / tail[start])
    return out


def eigenfunction(
    kindj: Kind,
    form: Form,
    m: int,
    p: LameParams,
    norm: Normalization = "UnitCoeff",
    config: SolverConfig = DEFAULT_CONFIG,
    truncation: int | None = None,
) -> SeriesEigenfunction:
    """The m-th Lamé-Wangerin eigenfunction of kind j.

    The eigenvector of the truncated self-adjoint operator supplies the leading
    coefficients; beyond the point where they fall below `SPLICE_LEVEL` of their
    peak the recessive solution of the recursion takes over. Finitely supported
    eigenvectors (decoupled blocks) are kept as they are.

    Args:
        kindj: Wangerin kind.
        form: Expansion form of the returned coefficients.
        m: Eigenvalue index.
        p: Parameters; `h` is ignored.
        norm: Normalization policy.
        config: Solver settings.
        truncation: Stored coefficients minus one; defaults to `eigenfunction_truncation`.

    Returns:
        The eigenfunction with `params.h` bound to H_m.
    """
    if m < 0:
        msg = f"eigenvalue index must be nonnegative, got {m}"
        raise DomainError(msg)
    if truncation is not None and truncation <= m + 2:
        msg = f"truncation must exceed m + 2 = {m + 2}, got {truncation}"
        raise DomainError(msg)
    pair = wangerin_eigenvalues(kindj, p, m, config=config)[m]
    bound = p.with_h(pair.h)
    n = eigenfunction_truncation(m, p.modulus) if truncation is None else truncation
    vector = pair.vector
    if vector[-1] == 0.0 and vector[-2] == 0.0:
        coeffs = np.zeros(max(n, vector.size) + 1)
        coeffs[: vector.size] = vector
        coeffs = coeffs[: max(n + 1, int(np.flatnonzero(vector)[-1]) + 3)]
    else:
        coeffs = _splice_tail(vector, kindj, bound, n)
    logger.debug("Eigenfunction kind %d m=%d: h=%.15g, %d coefficients", kindj, m, pair.h, coeffs.size)
    f = SeriesEigenfunction(kindj=kindj, form="SelfAdjoint", params=bound, coeffs=coeffs, m=m)
    if form == "Plain":
        f = to_plain(f)
    return _normalize(f, norm)
