"""Monodromy integration of Lamé's equation and Floquet eigenvalues.

Lamé's equation w'' + (h - nu(nu+1) k^2 sn^2 z) w = 0 is integrated in z for
the canonical fundamental system w1(0) = 1, w1'(0) = 0, w2(0) = 0, w2'(0) = 1.
Hill's discriminant is D(h) = w1(2K) + w2'(2K), and h is a Floquet eigenvalue
with exponent mu when D(h) = 2 cos(mu pi).

Because sn^2 is even about z = K, the half-period values already determine D:

    D     = 2 (w1 w2' + w1' w2)(K)
    D - 2 = 4 w1'(K) w2(K)
    D + 2 = 4 w1(K) w2'(K)

Floquet eigenvalues are tracked from k = 0, where they are (mu + 2n)^2, along
a geometric homotopy in k. For integer mu the two factors of D -+ 2 are tracked
separately, so double eigenvalues appear as coincident simple roots.

## Usage

```python
from lamekit.elliptic import modulus_from_k
from lamekit.floquet import floquet_eigenvalues
from lamekit.recurrence import LameParams

floquet_eigenvalues(0.4, LameParams(nu=0.3, modulus=modulus_from_k(0.5)), m_max=4)
```
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from lamekit.config import DEFAULT_CONFIG, SolverConfig
from lamekit.elliptic import Modulus, modulus_from_k
from lamekit.errors import ConvergenceError, DomainError
from lamekit.recurrence import LameParams

logger = logging.getLogger(__name__)

Target = Literal["discriminant", "w1", "dw1", "w2", "dw2"]
"""Function of h whose roots are tracked: D - 2 cos(mu pi) or one of the half-period values."""

INTEGER_MU_TOL = 1e-12
EXTRA_ROOTS = 2  # tracked beyond m_max so the top requested root always has a neighbour above it
INTERMEDIATE_RTOL = 1e-9  # integration tolerance at intermediate homotopy steps
INTERMEDIATE_ROOT_TOL = 1e-6  # relative root tolerance at intermediate homotopy steps
ILLINOIS_MAX_ITERATIONS = 300
BISECT_EVERY = 5  # every few false-position steps one plain bisection step is taken
UPPER_PROBES = np.array([0.1, 0.2, 0.4, 0.8, 1.6, 3.2])  # fractions of the last gap tried above the top root
SCAN_MAX_DOUBLINGS = 30
WRONSKIAN_TOL = 1e-9

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class DiscriminantSample:
    """Monodromy data at one value of h.

    Attributes:
        h: Spectral parameter.
        D: Hill's discriminant w1(2K) + w2'(2K).
        w1_end: w1(2K).
        dw1_end: w1'(2K).
        w2_end: w2(2K).
        dw2_end: w2'(2K).
    """

    h: float
    D: float
    w1_end: float
    dw1_end: float
    w2_end: float
    dw2_end: float

    @property
    def wronskian(self) -> float:
        """Determinant of the monodromy matrix, 1 for an exact integration."""
        return self.w1_end * self.dw2_end - self.dw1_end * self.w2_end


@dataclass(frozen=True)
class HalfPeriodValues:
    """Values of the canonical solutions at z = K, vectorized over h."""

    w1: FloatArray
    dw1: FloatArray
    w2: FloatArray
    dw2: FloatArray

    @property
    def discriminant(self) -> FloatArray:
        """Hill's discriminant reconstructed from the half period."""
        return 2.0 * (self.w1 * self.dw2 + self.dw1 * self.w2)


def _require_modulus(m: Modulus) -> None:
    if not 0.0 < m.k < 1.0:
        msg = f"monodromy integration needs 0 < k < 1, got k={m.k!r}"
        raise DomainError(msg)


def _integrate(hs: FloatArray, nu: float, m: Modulus, z_end: float, rtol: float, atol: float) -> FloatArray:
    """Canonical solutions at z_end for every h in hs, as a (4, len(hs)) array.

    sn, cn, dn are carried along as the first three state components.
    """
    nh = hs.size
    q = nu * (nu + 1.0) * m.k**2
    k2 = m.k**2
    y0 = np.zeros(3 + 4 * nh)
    y0[1] = 1.0
    y0[2] = 1.0
    y0[3 : 3 + nh] = 1.0
    y0[3 + 3 * nh :] = 1.0

    def rhs(_z: float, y: FloatArray) -> FloatArray:
        sn, cn, dn = y[0], y[1], y[2]
        w = y[3:].reshape(4, nh)
        coef = q * sn * sn - hs
        out = np.empty_like(y)
        out[0] = cn * dn
        out[1] = -sn * dn
        out[2] = -k2 * sn * cn
        out[3:] = np.concatenate([w[1], coef * w[0], w[3], coef * w[2]])
        return out

    sol = solve_ivp(rhs, (0.0, z_end), y0, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        msg = f"monodromy integration failed: {sol.message}"
        raise ConvergenceError(msg)
    return sol.y[3:, -1].reshape(4, nh)


def integrate_lame(h: float, p: LameParams, config: SolverConfig = DEFAULT_CONFIG) -> DiscriminantSample:
    """Integrate the canonical fundamental system over one period [0, 2K].

    The Wronskian of the result is 1 for an exact integration. Its defect is
    measured relative to the larger of the two products it is formed from.

    Raises:
        DomainError: If k is not in (0, 1).
        ConvergenceError: If the integrator fails or the Wronskian defect exceeds `WRONSKIAN_TOL`.
    """
    _require_modulus(p.modulus)
    w1, dw1, w2, dw2 = _integrate(np.array([float(h)]), p.nu, p.modulus, 2.0 * p.modulus.bigK, config.ode_rtol, config.ode_atol)[:, 0]
    sample = DiscriminantSample(h=float(h), D=float(w1 + dw2), w1_end=float(w1), dw1_end=float(dw1), w2_end=float(w2), dw2_end=float(dw2))
    defect = abs(sample.wronskian - 1.0) / max(1.0, abs(w1 * dw2), abs(dw1 * w2))
    if defect > WRONSKIAN_TOL:
        msg = f"Wronskian defect {defect:.3e} at h={h!r} exceeds {WRONSKIAN_TOL:.0e}; tighten ode_rtol/ode_atol"
        raise ConvergenceError(msg)
    return sample


def discriminant(h: float, p: LameParams, config: SolverConfig = DEFAULT_CONFIG) -> float:
    """Hill's discriminant D(h, nu, k)."""
    return integrate_lame(h, p, config).D


def half_period_values(h: ArrayLike, p: LameParams, config: SolverConfig = DEFAULT_CONFIG) -> HalfPeriodValues:
    """w1, w1', w2, w2' at z = K for one or many values of h."""
    _require_modulus(p.modulus)
    hs = np.atleast_1d(np.asarray(h, dtype=float))
    w1, dw1, w2, dw2 = _integrate(hs, p.nu, p.modulus, p.modulus.bigK, config.ode_rtol, config.ode_atol)
    return HalfPeriodValues(w1=w1, dw1=dw1, w2=w2, dw2=dw2)


def canonicalize(mu: float, nu: float) -> tuple[float, float]:
    """Eigenvalue-preserving representative with mu in [0, 1] and nu >= -1/2.

    Uses h_m(mu + 2) = h_m(mu) = h_m(-mu) and the invariance under nu -> -nu - 1.

    Examples:
        >>> canonicalize(2.6, -1.3)
        (0.6, 0.3)
    """
    mu_c = math.fmod(mu, 2.0)
    if mu_c < 0.0:
        mu_c += 2.0
    if mu_c > 1.0:
        mu_c = 2.0 - mu_c
    nearest = round(mu_c)
    if abs(mu_c - nearest) < INTEGER_MU_TOL:
        mu_c = float(nearest)
    nu_c = -nu - 1.0 if nu < -0.5 else nu
    return round(mu_c, 15), round(nu_c, 15)


def _circular_roots(target: Target, mu: float, count: int) -> FloatArray:
    """First `count` roots of the target at k = 0."""
    j = np.arange(count, dtype=float)
    if target == "discriminant":
        n = np.arange(-count, count + 1, dtype=float)
        return np.sort((mu + 2.0 * n) ** 2)[:count]
    if target == "dw1":
        return 4.0 * j**2
    if target == "w2":
        return 4.0 * (j + 1.0) ** 2
    return (2.0 * j + 1.0) ** 2


def _target_function(target: Target, mu: float, nu: float, m: Modulus, rtol: float, atol: float) -> Callable[[FloatArray], FloatArray]:
    shift = 2.0 * math.cos(mu * math.pi)
    row = {"w1": 0, "dw1": 1, "w2": 2, "dw2": 3}

    def evaluate(hs: FloatArray) -> FloatArray:
        w = _integrate(np.asarray(hs, dtype=float), nu, m, m.bigK, rtol, atol)
        if target == "discriminant":
            return 2.0 * (w[0] * w[3] + w[1] * w[2]) - shift
        return w[row[target]]

    return evaluate


def _illinois(fn: Callable[[FloatArray], FloatArray], a: FloatArray, b: FloatArray, fa: FloatArray, fb: FloatArray, tol: FloatArray) -> FloatArray:
    """Vectorized Illinois false position on sign-changing brackets [a, b]."""
    a, b, fa, fb = a.copy(), b.copy(), fa.copy(), fb.copy()
    done = (np.abs(b - a) <= tol) | (fb == 0.0)
    for iteration in range(ILLINOIS_MAX_ITERATIONS):
        if np.all(done):
            return b
        act = ~done
        if iteration % BISECT_EVERY == BISECT_EVERY - 1:
            x = 0.5 * (a + b)
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                x = b - fb * (b - a) / (fb - fa)
            x = np.where(np.isfinite(x), x, 0.5 * (a + b))
        fx = np.zeros_like(x)
        fx[act] = fn(x[act])
        flip = act & (fx * fb < 0.0)
        keep = act & ~flip
        a = np.where(flip, b, a)
        fa = np.where(flip, fb, np.where(keep, 0.5 * fa, fa))
        b = np.where(act, x, b)
        fb = np.where(act, fx, fb)
        done |= (np.abs(b - a) <= tol) | (act & (fx == 0.0))
    msg = f"root refinement did not converge in {ILLINOIS_MAX_ITERATIONS} iterations"
    raise ConvergenceError(msg)


def _refine_predictions(fn: Callable[[FloatArray], FloatArray], pred: FloatArray, tol: FloatArray) -> FloatArray | None:
    """Refine predicted roots, or return None when a bracket is not confirmed.

    Root j has f > 0 left of it for even j and f < 0 for odd j. Edges between
    neighbouring roots are the midpoints of the predictions; the top root is
    closed by the first probe above it with the expected sign.
    """
    n = pred.size
    gap_low = pred[1] - pred[0] if n > 1 else 1.0
    gap_high = pred[-1] - pred[-2] if n > 1 else 1.0
    lower = pred[0] - max(1.0, gap_low)
    mids = 0.5 * (pred[1:] + pred[:-1])
    probes = pred[-1] + max(gap_high, 1e-3) * UPPER_PROBES
    values = fn(np.concatenate([[lower], mids, probes]))
    edges_f = values[: n]
    probe_f = values[n:]
    expected = np.where(np.arange(n + 1) % 2 == 0, 1.0, -1.0)
    if np.any(np.sign(edges_f) != expected[:n]):
        return None
    matches = np.flatnonzero(np.sign(probe_f) == expected[n])
    if matches.size == 0:
        return None
    edges = np.concatenate([[lower], mids, [probes[matches[0]]]])
    f = np.concatenate([edges_f, [probe_f[matches[0]]]])
    return _illinois(fn, edges[:-1], edges[1:], f[:-1], f[1:], tol)


def _scan_roots(fn: Callable[[FloatArray], FloatArray], count: int, h_lo: float, h_hi: float, tol: float, points: int) -> FloatArray:
    """First `count` roots of fn above h_lo from a dense sign scan, polished by brentq."""
    for _ in range(SCAN_MAX_DOUBLINGS):
        grid = np.linspace(h_lo, h_hi, points)
        values = fn(grid)
        positive = values >= 0.0
        changes = np.flatnonzero(positive[:-1] != positive[1:])
        if changes.size >= count:
            break
        h_hi = h_lo + 2.0 * (h_hi - h_lo)
    else:
        msg = f"scan found fewer than {count} roots below h={h_hi!r}"
        raise ConvergenceError(msg)

    def scalar(h: float) -> float:
        return float(fn(np.array([h]))[0])

    roots = [brentq(scalar, grid[i], grid[i + 1], xtol=tol, rtol=4.0 * np.finfo(float).eps) for i in changes[:count]]
    return np.asarray(roots, dtype=float)


def _scan_target(target: Target, mu: float, nu: float, m: Modulus, count: int, tol: float, config: SolverConfig) -> FloatArray:
    fn = _target_function(target, mu, nu, m, config.ode_rtol, config.ode_atol)
    q = nu * (nu + 1.0) * m.k**2
    h_lo = min(0.0, q) - 1.0
    estimate = float(_circular_roots(target, mu, count)[-1]) * (math.pi / (2.0 * m.bigK)) ** 2 + max(q, 0.0) + 1.0
    return _scan_roots(fn, count, h_lo, max(estimate, h_lo + 1.0), tol, config.scan_points)


def _track(target: Target, mu: float, nu: float, m: Modulus, count: int, tol: float, config: SolverConfig) -> FloatArray:
    """Follow the first `count` roots of the target from k = 0 to m.k."""
    c = 0.5 * nu * (nu + 1.0)
    roots = _circular_roots(target, mu, count)
    k_old, big_k_old = 0.0, math.pi / 2.0
    steps = config.homotopy_steps
    for j in range(steps + 1):
        final = j == steps
        mod = m if final else modulus_from_k(m.k * 2.0 ** (j - steps))
        pred = (roots - c * k_old**2) * (big_k_old / mod.bigK) ** 2 + c * mod.k**2
        if final:
            step_tol = np.full(pred.shape, tol)
            fn = _target_function(target, mu, nu, mod, config.ode_rtol, config.ode_atol)
        else:
            step_tol = INTERMEDIATE_ROOT_TOL * np.maximum(1.0, np.abs(pred))
            fn = _target_function(target, mu, nu, mod, INTERMEDIATE_RTOL, INTERMEDIATE_RTOL)
        refined = _refine_predictions(fn, pred, step_tol)
        if refined is None:
            logger.warning("Lost a %s root at k=%.3g (mu=%r, nu=%r); falling back to a scan", target, mod.k, mu, nu)
            refined = _scan_target(target, mu, nu, mod, count, float(np.min(step_tol)), config)
        logger.debug("Homotopy step %d/%d at k=%.3g: %s", j, steps, mod.k, refined)
        roots = refined
        k_old, big_k_old = mod.k, mod.bigK
    return roots


def _targets(mu: float) -> tuple[Target, ...]:
    if mu == 0.0:
        return ("dw1", "w2")
    if mu == 1.0:
        return ("w1", "dw2")
    return ("discriminant",)


def floquet_eigenvalues(
    mu: float,
    p: LameParams,
    m_max: int,
    tol: float | None = None,
    config: SolverConfig = DEFAULT_CONFIG,
) -> FloatArray:
    """Floquet eigenvalues h_0 <= ... <= h_{m_max} for the exponent mu.

    Args:
        mu: Floquet exponent; w(z + 2K) = exp(i mu pi) w(z).
        p: Parameters; `mu` and `h` on it are ignored.
        m_max: Largest index returned.
        tol: Root tolerance, defaults to `config.eigen_tol`.
        config: Solver settings.

    Returns:
        The eigenvalues in nondecreasing order, double roots listed twice.

    Raises:
        DomainError: If k is not in (0, 1) or m_max is negative.
        ConvergenceError: If a root cannot be recovered even by scanning.
    """
    _require_modulus(p.modulus)
    if m_max < 0:
        msg = f"m_max must be nonnegative, got {m_max}"
        raise DomainError(msg)
    tol = config.eigen_tol if tol is None else tol
    mu_c, nu_c = canonicalize(mu, p.nu)
    count = m_max + 1 + EXTRA_ROOTS
    tracked = [_track(target, mu_c, nu_c, p.modulus, count, tol, config) for target in _targets(mu_c)]
    return np.sort(np.concatenate(tracked))[: m_max + 1]


def scan_floquet_eigenvalues(
    mu: float,
    p: LameParams,
    m_max: int,
    tol: float | None = None,
    config: SolverConfig = DEFAULT_CONFIG,
) -> FloatArray:
    """Floquet eigenvalues from a dense sign scan in h at the final k only.

    Slower than the homotopy and blind to roots closer than the scan spacing;
    used as its fallback and as an independent check.
    """
    _require_modulus(p.modulus)
    tol = config.eigen_tol if tol is None else tol
    mu_c, nu_c = canonicalize(mu, p.nu)
    count = m_max + 1 + EXTRA_ROOTS
    found = [_scan_target(target, mu_c, nu_c, p.modulus, count, tol, config) for target in _targets(mu_c)]
    return np.sort(np.concatenate(found))[: m_max + 1]
