"""Jacobi elliptic functions, complete elliptic integrals and the eta map.

Everything here is built from the arithmetic-geometric mean: K(k) by the AGM and
sn, cn, dn by the descending Landen transformation. Complex arguments are only
needed in the strip 0 <= Im z < K', where the addition theorem combines real
arguments at the moduli k and k'.

## Usage

```python
from lamekit.elliptic import jacobi, modulus_from_k

m = modulus_from_k(0.5)
triple = jacobi(0.7, m)
triple.sn**2 + triple.cn**2  # 1.0
```
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from lamekit.errors import DomainError

logger = logging.getLogger(__name__)

LANDEN_CUTOFF = 1e-15  # stop descending once c_N / a_N drops below this
AGM_MAX_ITERATIONS = 64
SEGMENT_SLACK = 1e-12  # relative slack accepted at the ends of [0, 2K]

FloatArray = NDArray[np.float64]
ComplexArray = NDArray[np.complex128]


@dataclass(frozen=True)
class Modulus:
    """Constants derived from the modulus k.

    Attributes:
        k: The modulus, in (0, 1). The circular limit uses k = 0.
        kprime: Complementary modulus sqrt(1 - k^2).
        bigK: Complete elliptic integral K(k).
        bigKprime: Complete elliptic integral K(k').
        L: arccosh(1/k), the half-width of the strip in the amplitude variable.
        eta1: (1 - k') / (1 + k'), the recessive coefficient ratio.
        eta2: (1 + k') / (1 - k') = 1 / eta1.
    """

    k: float
    kprime: float
    bigK: float  # noqa: N815
    bigKprime: float  # noqa: N815
    L: float
    eta1: float
    eta2: float

    @property
    def is_circular(self) -> bool:
        """Whether this is the k = 0 limit where sn, cn reduce to sin, cos."""
        return self.k == 0.0

    def complementary(self) -> Modulus:
        """Modulus built from k' (used for the imaginary half of the strip)."""
        return _modulus_cached(self.kprime)


@dataclass(frozen=True)
class JacobiTriple:
    """Values of sn, cn, dn and the amplitude at real arguments.

    Scalars in give numpy scalars out; arrays broadcast elementwise.

    Attributes:
        sn: sin(am x).
        cn: cos(am x).
        dn: sqrt(1 - k^2 sn^2).
        am: Jacobi amplitude, continuous with am(x + 2K) = am(x) + pi.
    """

    sn: Any
    cn: Any
    dn: Any
    am: Any


@dataclass(frozen=True)
class ComplexJacobiTriple:
    """Values of sn, cn, dn at z = x + iy in the strip 0 <= y < K'."""

    sn: Any
    cn: Any
    dn: Any


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    for _ in range(AGM_MAX_ITERATIONS):
        if abs(a - b) <= 4.0 * np.finfo(float).eps * abs(a):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_elliptic_k(k: float) -> float:
    """Complete elliptic integral of the first kind K(k) for 0 <= k < 1."""
    if not 0.0 <= k < 1.0:
        msg = f"K(k) needs 0 <= k < 1, got k={k!r}"
        raise DomainError(msg)
    kprime = math.sqrt((1.0 - k) * (1.0 + k))
    return math.pi / (2.0 * agm(1.0, kprime))


def modulus_from_k(k: float) -> Modulus:
    """Build every modulus-derived constant for 0 < k < 1.

    Args:
        k: Elliptic modulus.

    Returns:
        The populated `Modulus`.

    Raises:
        DomainError: If k is not a finite number in (0, 1).
    """
    if not (math.isfinite(k) and 0.0 < k < 1.0):
        msg = f"modulus must satisfy 0 < k < 1, got k={k!r}"
        raise DomainError(msg)
    return _modulus_cached(float(k))


def circular_limit() -> Modulus:
    """The degenerate modulus k = 0 (K = pi/2, no second period, eta1 = 0)."""
    return Modulus(k=0.0, kprime=1.0, bigK=math.pi / 2.0, bigKprime=math.inf, L=math.inf, eta1=0.0, eta2=math.inf)


@lru_cache(maxsize=256)
def _modulus_cached(k: float) -> Modulus:
    kprime = math.sqrt((1.0 - k) * (1.0 + k))
    # k^2 = (1 - k')(1 + k') avoids cancellation in 1 - k' for small k
    eta1 = (k / (1.0 + kprime)) ** 2
    return Modulus(
        k=k,
        kprime=kprime,
        bigK=math.pi / (2.0 * agm(1.0, kprime)),
        bigKprime=math.pi / (2.0 * agm(1.0, k)),
        L=math.log((1.0 + kprime) / k),
        eta1=eta1,
        eta2=1.0 / eta1,
    )


@lru_cache(maxsize=256)
def _landen_sequence(k: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """AGM scale sequence (a_n, c_n) for the descending Landen transformation."""
    a = [1.0]
    b = math.sqrt((1.0 - k) * (1.0 + k))
    c = [k]
    while c[-1] / a[-1] >= LANDEN_CUTOFF and len(a) < AGM_MAX_ITERATIONS:
        a_n = a[-1]
        a.append(0.5 * (a_n + b))
        c.append(0.5 * (a_n - b))
        b = math.sqrt(a_n * b)
    return tuple(a), tuple(c)


def _amplitude_reduced(x0: FloatArray, k: float) -> FloatArray:
    """Amplitude on the reduced interval [-K, K) by descending Landen."""
    a, c = _landen_sequence(k)
    depth = len(a) - 1
    phi = (2.0**depth) * a[depth] * x0
    for n in range(depth, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[n] / a[n] * np.sin(phi)))
    return phi


def jacobi(x: ArrayLike, m: Modulus) -> JacobiTriple:
    """Evaluate sn, cn, dn and am at real arguments.

    The argument is reduced to x0 in [-K, K) with x = x0 + 2Kn, the amplitude is
    computed there by Landen and shifted by n*pi, so am(x + 2K) = am(x) + pi holds
    to rounding.

    Args:
        x: Real argument(s).
        m: Modulus.

    Returns:
        The `JacobiTriple` at x.

    Raises:
        DomainError: If any argument is not finite.
    """
    xs = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xs)):
        msg = "jacobi needs finite real arguments"
        raise DomainError(msg)
    period = 2.0 * m.bigK
    n = np.floor((xs + m.bigK) / period)
    x0 = xs - n * period
    am0 = _amplitude_reduced(x0, m.k)
    sign = 1.0 - 2.0 * np.mod(n, 2.0)
    sn = sign * np.sin(am0)
    cn = sign * np.cos(am0)
    dn = np.sqrt(m.kprime**2 + (m.k * cn) ** 2)
    am = am0 + n * math.pi
    return JacobiTriple(sn=sn[()], cn=cn[()], dn=dn[()], am=am[()])


def jacobi_complex(x: ArrayLike, y: ArrayLike, m: Modulus) -> ComplexJacobiTriple:
    """Evaluate sn, cn, dn at z = x + iy for 0 <= y < K'.

    Uses the addition theorem with real-argument values at (x, k) and (y, k').

    Raises:
        DomainError: If y is outside [0, K') (the pole of sn sits at iK').
    """
    xs, ys = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(ys < 0.0) or np.any(ys >= m.bigKprime):
        msg = f"imaginary part must lie in [0, K'={m.bigKprime!r})"
        raise DomainError(msg)
    re = jacobi(xs, m)
    im = jacobi(ys, m.complementary())
    s, c, d = np.asarray(re.sn), np.asarray(re.cn), np.asarray(re.dn)
    s1, c1, d1 = np.asarray(im.sn), np.asarray(im.cn), np.asarray(im.dn)
    k2 = m.k**2
    delta = c1**2 + k2 * (s * s1) ** 2
    sn = (s * d1 + 1j * c * d * s1 * c1) / delta
    cn = (c * c1 - 1j * s * d * s1 * d1) / delta
    dn = (d * c1 * d1 - 1j * k2 * s * c * s1) / delta
    return ComplexJacobiTriple(sn=sn[()], cn=cn[()], dn=dn[()])


def eta_on_segment(u: ArrayLike, m: Modulus) -> Any:
    """Image of z = u + iK' under the eta map, eta = (1 - dn u) / (1 + dn u).

    Computed as k^2 sn^2 / (1 + dn)^2 so the result is real, nonnegative and free
    of cancellation near u = 0.

    Raises:
        DomainError: If u is outside [0, 2K].
    """
    us = np.asarray(u, dtype=float)
    slack = SEGMENT_SLACK * m.bigK
    if np.any(us < -slack) or np.any(us > 2.0 * m.bigK + slack):
        msg = f"segment parameter must lie in [0, 2K={2.0 * m.bigK!r}]"
        raise DomainError(msg)
    triple = jacobi(us, m)
    return ((m.k * np.asarray(triple.sn)) / (1.0 + np.asarray(triple.dn))) ** 2


def eta_on_real_axis(x: ArrayLike, m: Modulus) -> Any:
    """Image of real x under the eta map: exp(-2i(pi/2 - am x)), on the unit circle."""
    am = np.asarray(jacobi(x, m).am)
    return np.exp(1j * (2.0 * am - math.pi))[()]


def zeta_log(x: ArrayLike, y: ArrayLike, m: Modulus) -> Any:
    """Continuous logarithm of zeta(z) = sn z - i cn z on the strip 0 <= Im z < K'.

    On the real axis this is i(am x - pi/2). Off the axis x is reduced to
    x0 in [0, 2K), where the principal logarithm is continuous, and
    log zeta(x0 + 2Kn) = log zeta(x0) + i n pi.
    """
    xs, ys = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    period = 2.0 * m.bigK
    n = np.floor(xs / period)
    x0 = xs - n * period
    triple = jacobi_complex(x0, ys, m)
    log0 = np.log(np.asarray(triple.sn) - 1j * np.asarray(triple.cn))
    on_axis = ys == 0.0
    if np.any(on_axis):
        am = np.asarray(jacobi(xs, m).am)
        log0 = np.where(on_axis, 1j * (am - math.pi / 2.0), log0 + 1j * math.pi * n)
        return log0[()]
    return (log0 + 1j * math.pi * n)[()]
