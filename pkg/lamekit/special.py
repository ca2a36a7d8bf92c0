"""Closed-form and finite-dimensional cases of the Lamé-Wangerin problems.

- `ell_index`: which circular-limit eigenvalue (2l + nu + j)^2 the index m tends to.
- `algebraic_functions`: the finite eta-series solutions at nu = -p - 1/2.
- `lame_polynomials`: the 2p + 1 polynomial solutions in sn, cn, dn at nu = -p - 1.
- `gegenbauer_limit` / `gegenbauer_form`: the k -> 0 limits in the angle s = pi u / (2K).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import binom, eval_gegenbauer, poch

from lamekit.config import DEFAULT_CONFIG, SolverConfig
from lamekit.elliptic import Modulus, jacobi
from lamekit.errors import DomainError
from lamekit.recurrence import LameParams
from lamekit.spectra import Kind, build_algebraic, eigenpairs, lame_polynomial_eigenpairs
from lamekit.wangerin import SeriesEigenfunction

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12  # relative distance under which two circular-limit values count as equal
PAD_ZEROS = 2  # explicit trailing zeros marking a terminating series

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class EllIndex:
    """Circular-limit label of the eigenvalue H_m^(j)(nu, k).

    Attributes:
        m: Eigenvalue index.
        nu: Degree parameter.
        kindj: Wangerin kind.
        ell: Index l with H_m(nu, 0) = (2l + nu + j)^2.
    """

    m: int
    nu: float
    kindj: Kind
    ell: int

    @property
    def value(self) -> float:
        """The limit eigenvalue (2l + nu + j)^2."""
        return (2 * self.ell + self.nu + self.kindj) ** 2


def _circular_values(kindj: Kind, m: int, nu: float) -> tuple[FloatArray, NDArray[np.int64]]:
    window = m + math.ceil(abs(nu)) + 2
    n = np.arange(window + 1)
    values = (2.0 * n + nu + kindj) ** 2
    order = np.argsort(values, kind="stable")
    return values, order


def ell_index(kindj: Kind, m: int, nu: float) -> EllIndex:
    """Index l of the (m+1)-th smallest value of (2n + nu + j)^2 over n >= 0.

    Equal values are ordered by smaller n first.

    Examples:
        >>> ell_index(1, 2, 0.3).ell
        2
    """
    if m < 0:
        msg = f"eigenvalue index must be nonnegative, got {m}"
        raise DomainError(msg)
    _, order = _circular_values(kindj, m, nu)
    return EllIndex(m=m, nu=nu, kindj=kindj, ell=int(order[m]))


def ell_range(kindj: Kind, m: int, nu: float) -> tuple[int, int]:
    """Smallest and largest l whose circular-limit value ties with that of index m."""
    values, order = _circular_values(kindj, m, nu)
    target = values[order[m]]
    tied = np.flatnonzero(np.abs(values - target) <= TIE_TOL * max(1.0, target))
    return int(tied.min()), int(tied.max())


@dataclass(frozen=True)
class AlgebraicFunction:
    """One eigenvalue at nu = -p - 1/2 with both finite-series solutions.

    Attributes:
        index: Position of h in the spectrum of the p x p matrix.
        h: The eigenvalue, shared by both kinds.
        w1: Kind-1 function, SelfAdjoint coefficients a_0..a_{p-1}.
        w2: Kind-2 function, the same coefficients reversed.
    """

    index: int
    h: float
    w1: SeriesEigenfunction
    w2: SeriesEigenfunction


def algebraic_functions(p_int: int, m: Modulus, config: SolverConfig = DEFAULT_CONFIG) -> list[AlgebraicFunction]:
    """The p algebraic Lamé functions of each kind at nu = -p - 1/2."""
    matrix = build_algebraic(1, p_int, m)
    results = []
    for pair in eigenpairs(matrix, p_int - 1, config):
        params = LameParams(nu=-p_int - 0.5, modulus=m, h=pair.h)
        a = np.concatenate([pair.vector, np.zeros(PAD_ZEROS)])
        b = np.concatenate([pair.vector[::-1], np.zeros(PAD_ZEROS)])
        results.append(
            AlgebraicFunction(
                index=pair.index,
                h=pair.h,
                w1=SeriesEigenfunction(kindj=1, form="SelfAdjoint", params=params, coeffs=a),
                w2=SeriesEigenfunction(kindj=2, form="SelfAdjoint", params=params, coeffs=b),
            )
        )
    return results


def _classify(kindj: Kind, p_int: int, symmetric: bool) -> str:  # noqa: FBT001
    parity = p_int if kindj == 1 else p_int - 1
    if parity % 2 == 0:
        name = "P(sn^2)" if symmetric else "sn cn P(sn^2)"
    else:
        name = "sn P(sn^2)" if symmetric else "cn P(sn^2)"
    return name if kindj == 1 else f"dn {name}"


def _zeta_power(q: int, degree: int) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """(sn - i cn)^q as A(sn) + cn B(sn), using cn^2 = 1 - sn^2; negative q uses (sn + i cn)^|q|."""
    unit = -1j if q >= 0 else 1j
    power = abs(q)
    a = np.zeros(degree + 1, dtype=complex)
    b = np.zeros(degree + 1, dtype=complex)
    for r in range(power + 1):
        term = math.comb(power, r) * unit**r
        one_minus = np.polynomial.polynomial.polypow([1.0, 0.0, -1.0], r // 2)
        poly = np.zeros(power - r + 1)
        poly[-1] = 1.0
        full = np.polynomial.polynomial.polymul(poly, one_minus) * term
        target = a if r % 2 == 0 else b
        target[: full.size] += full
    return a, b


@dataclass(frozen=True)
class PolynomialSolution:
    """A Lamé polynomial w = dn^e (A(sn) + cn B(sn)) at nu = -p - 1.

    Attributes:
        p: Degree parameter, nu = -p - 1.
        kindj: 1 for the (p+1)-term first kind, 2 for the p-term dn kind.
        classification: Family name such as "sn cn P(sn^2)".
        h: The eigenvalue.
        coeffs: Coefficients c_n of sum c_n (sn - i cn)^(q_n), symmetric or antisymmetric.
        modulus: Elliptic modulus.
        a_poly: Coefficients of A in increasing powers of sn.
        b_poly: Coefficients of B in increasing powers of sn.
        phase: Unit factor that makes the zeta-series real.
    """

    p: int
    kindj: Kind
    classification: str
    h: float
    coeffs: FloatArray
    modulus: Modulus
    a_poly: FloatArray
    b_poly: FloatArray
    phase: complex

    @property
    def exponents(self) -> NDArray[np.int64]:
        """Powers q_n of zeta in the series."""
        n = np.arange(self.coeffs.size)
        return 2 * n - self.p if self.kindj == 1 else 2 * n + 1 - self.p

    @property
    def symmetric(self) -> bool:
        """Whether c_n = c_{p-n} (otherwise c_n = -c_{p-n})."""
        return bool(np.linalg.norm(self.coeffs - self.coeffs[::-1]) < np.linalg.norm(self.coeffs + self.coeffs[::-1]))

    def evaluate(self, x: ArrayLike) -> Any:
        """Value at real x from the explicit sn, cn, dn form."""
        t = jacobi(x, self.modulus)
        sn, cn, dn = np.asarray(t.sn), np.asarray(t.cn), np.asarray(t.dn)
        core = np.polynomial.polynomial.polyval(sn, self.a_poly) + cn * np.polynomial.polynomial.polyval(sn, self.b_poly)
        return (core * dn if self.kindj == 2 else core)[()]  # noqa: PLR2004

    def residual(self, x: ArrayLike) -> Any:
        """|w'' + (h - p(p+1) k^2 sn^2) w| at real x from exact derivatives.

        Uses d/dz (sn - i cn) = i dn (sn - i cn) and dn' = -k^2 sn cn.
        """
        t = jacobi(x, self.modulus)
        sn, cn, dn = np.asarray(t.sn), np.asarray(t.cn), np.asarray(t.dn)
        k2 = self.modulus.k**2
        zeta = sn - 1j * cn
        q = self.exponents.astype(float)
        powers = zeta[..., None] ** q
        s0 = np.sum(self.coeffs * powers, axis=-1)
        s1 = np.sum(self.coeffs * 1j * q * powers, axis=-1) * dn
        s2 = np.sum(self.coeffs * (-1j * q * k2 * sn[..., None] * cn[..., None] - q**2 * dn[..., None] ** 2) * powers, axis=-1)
        if self.kindj == 1:
            w, w2 = s0, s2
        else:
            dn1 = -k2 * sn * cn
            dn2 = -k2 * dn * (cn**2 - sn**2)
            w = dn * s0
            w2 = dn2 * s0 + 2.0 * dn1 * s1 + dn * s2
        potential = self.h - self.p * (self.p + 1) * k2 * sn**2
        return np.abs(w2 + potential * w)[()]


def _polynomial_solution(kindj: Kind, p_int: int, m: Modulus, h: float, c: FloatArray) -> PolynomialSolution:
    exps = 2 * np.arange(c.size) - p_int if kindj == 1 else 2 * np.arange(c.size) + 1 - p_int
    degree = int(np.max(np.abs(exps))) + 1
    a = np.zeros(degree + 1, dtype=complex)
    b = np.zeros(degree + 1, dtype=complex)
    for cn_, q in zip(c, exps, strict=True):
        pa, pb = _zeta_power(int(q), degree)
        a += cn_ * pa
        b += cn_ * pb
    both = np.concatenate([a, b])
    lead = both[np.argmax(np.abs(both))]
    phase = complex(np.conj(lead) / abs(lead))
    symmetric = bool(np.linalg.norm(c - c[::-1]) < np.linalg.norm(c + c[::-1]))
    return PolynomialSolution(
        p=p_int,
        kindj=kindj,
        classification=_classify(kindj, p_int, symmetric),
        h=h,
        coeffs=c,
        modulus=m,
        a_poly=np.real(a * phase),
        b_poly=np.real(b * phase),
        phase=phase,
    )


def lame_polynomials(p_int: int, m: Modulus, config: SolverConfig = DEFAULT_CONFIG) -> list[PolynomialSolution]:
    """All 2p + 1 Lamé polynomials at nu = -p - 1, first kind then dn kind, each by increasing h."""
    if p_int < 0:
        msg = f"Lamé polynomials need p >= 0, got {p_int}"
        raise DomainError(msg)
    solutions = [_polynomial_solution(1, p_int, m, pair.h, pair.vector) for pair in lame_polynomial_eigenpairs(1, p_int, m, config)]
    if p_int >= 1:
        solutions += [_polynomial_solution(2, p_int, m, pair.h, pair.vector) for pair in lame_polynomial_eigenpairs(2, p_int, m, config)]
    logger.debug("Lamé polynomials p=%d: %s", p_int, [s.classification for s in solutions])
    return solutions


def _terminating_hypergeometric(ell: int, b: float, c: float, x: Any) -> Any:
    i = np.arange(ell + 1, dtype=float)
    terms = poch(-ell, i) * poch(b, i) / (poch(c, i) * poch(1.0, i))
    return np.polynomial.polynomial.polyval(x, terms)


def gegenbauer_limit(kindj: Kind, m: int, nu: float, s: ArrayLike) -> Any:
    """k -> 0 limit of the endpoint-normalized eigenfunction, in the angle s.

    Kind 1: (sin s)^(nu+1) F(-l, l+nu+1; 1/2; cos^2 s).
    Kind 2: -(sin s)^(nu+1) cos s F(-l, l+nu+2; 3/2; cos^2 s).

    Raises:
        DomainError: If s is not in (0, pi).
    """
    ss = np.asarray(s, dtype=float)
    if np.any(ss <= 0.0) or np.any(ss >= math.pi):
        msg = "gegenbauer_limit needs 0 < s < pi"
        raise DomainError(msg)
    ell = ell_index(kindj, m, nu).ell
    x = np.cos(ss) ** 2
    base = np.sin(ss) ** (nu + 1.0)
    if kindj == 1:
        return (base * _terminating_hypergeometric(ell, ell + nu + 1.0, 0.5, x))[()]
    return (-base * np.cos(ss) * _terminating_hypergeometric(ell, ell + nu + 2.0, 1.5, x))[()]


def gegenbauer_form(kindj: Kind, m: int, nu: float, s: ArrayLike) -> Any:
    """The same limit written with the Gegenbauer polynomial C_n^(nu+1)(cos s).

    Raises:
        DomainError: If nu <= -3/2 or the binomial normalization vanishes.
    """
    if nu <= -1.5:  # noqa: PLR2004
        msg = f"Gegenbauer form needs nu > -3/2, got nu={nu!r}"
        raise DomainError(msg)
    ell = ell_index(kindj, m, nu).ell
    ss = np.asarray(s, dtype=float)
    base = np.sin(ss) ** (nu + 1.0)
    if kindj == 1:
        norm = (-1.0) ** ell / binom(ell + nu, ell)
        degree = 2 * ell
    else:
        norm = (-1.0) ** (ell + 1) / (2.0 * (nu + 1.0) * binom(ell + nu + 1.0, ell))
        degree = 2 * ell + 1
    if not math.isfinite(norm):
        msg = f"Gegenbauer normalization vanishes at nu={nu!r}, l={ell}"
        raise DomainError(msg)
    return (base * norm * eval_gegenbauer(degree, nu + 1.0, np.cos(ss)))[()]
