"""Zero counting for Lamé-Wangerin eigenfunctions.

Two counts are available:

- `count_zeros_segment`: real zeros on the open segment (iK', K + iK'), found as
  sign changes of the coefficient series on (0, eta1). Every prefactor of the
  three expansion forms is positive there, so the series and the function
  vanish together.
- `winding_unit_circle`: zeros of the self-adjoint series in |eta| < 1, by the
  argument principle on |eta| = 1 (the image of the real axis).

## Usage

```python
from lamekit.analysis import count_zeros_segment, winding_unit_circle
from lamekit.elliptic import modulus_from_k
from lamekit.recurrence import LameParams
from lamekit.wangerin import eigenfunction

f = eigenfunction(1, "SelfAdjoint", 0, LameParams(nu=-4.2, modulus=modulus_from_k(0.5)))
count_zeros_segment(f).count  # 0
winding_unit_circle(f).winding  # 2
```
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import brentq

from lamekit.config import DEFAULT_CONFIG, SolverConfig
from lamekit.elliptic import eta_on_segment, jacobi
from lamekit.errors import ConvergenceError, DomainError, WindingRefusedError
from lamekit.special import PolynomialSolution
from lamekit.wangerin import SeriesEigenfunction, evaluate_on_real_axis, evaluate_on_segment, series_value, to_self_adjoint

logger = logging.getLogger(__name__)

STABLE_REPEATS = 3  # equal counts on this many consecutive grids
WINDING_INITIAL = 256
MAX_PHASE_STEP = 0.5 * math.pi
ROOT_SLACK = 1e-8  # distance from |eta| = 1 within which a polynomial root counts as on the circle

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class ZeroReport:
    """Real zeros of an eigenfunction on the segment (iK', K + iK').

    Attributes:
        count: Number of zeros.
        locations: Zeros as u-coordinates in (0, K), increasing.
        grid_size: Final sampling grid.
        stable: Whether the count agreed on the last grids.
    """

    count: int
    locations: FloatArray
    grid_size: int
    stable: bool


@dataclass(frozen=True)
class WindingReport:
    """Winding number of the self-adjoint series around |eta| = 1.

    Attributes:
        winding: Number of zeros in the open unit disk.
        min_modulus_on_circle: Smallest |v| seen on the final grid.
        grid_size: Final number of sample angles.
    """

    winding: int
    min_modulus_on_circle: float
    grid_size: int


def _segment_series(f: SeriesEigenfunction, u: FloatArray) -> FloatArray:
    eta = np.asarray(eta_on_segment(u, f.params.modulus))
    return np.asarray(series_value(f, eta), dtype=float)


def _sign_changes(values: FloatArray) -> NDArray[np.int64]:
    signs = np.sign(values)
    return np.flatnonzero(signs[:-1] * signs[1:] < 0.0)


def count_zeros_segment(f: SeriesEigenfunction, config: SolverConfig = DEFAULT_CONFIG) -> ZeroReport:
    """Count and locate the zeros of f on (iK', K + iK').

    The series is sampled on a uniform u-grid in (0, K) that doubles until the
    number of sign changes is the same on `STABLE_REPEATS` consecutive grids;
    each sign change is then polished by brentq.

    Raises:
        ConvergenceError: If the count is still changing beyond `config.zero_grid_max`.
    """
    big_k = f.params.modulus.bigK
    n = config.zero_grid_initial
    history: list[int] = []
    while True:
        u = big_k * (np.arange(1, n + 1) - 0.5) / n
        crossings = _sign_changes(_segment_series(f, u))
        history.append(crossings.size)
        logger.debug("Segment grid %d: %d sign changes", n, crossings.size)
        if len(history) >= STABLE_REPEATS and len(set(history[-STABLE_REPEATS:])) == 1:
            break
        if 2 * n > config.zero_grid_max:
            msg = f"zero count on the segment did not stabilize up to grid {n}: counts {history}"
            raise ConvergenceError(msg)
        n *= 2

    def scalar(x: float) -> float:
        return float(_segment_series(f, np.array([x]))[0])

    locations = np.array([brentq(scalar, u[i], u[i + 1], xtol=1e-14 * big_k) for i in crossings])
    return ZeroReport(count=int(crossings.size), locations=locations, grid_size=n, stable=True)


def winding_unit_circle(f: SeriesEigenfunction, config: SolverConfig = DEFAULT_CONFIG) -> WindingReport:
    """Zeros of the self-adjoint series inside |eta| < 1 by the argument principle.

    Raises:
        WindingRefusedError: If |v| on the circle drops below `config.winding_refusal`
            relative to the largest coefficient.
        ConvergenceError: If phase steps stay above pi/2 up to `config.zero_grid_max`.
    """
    v = to_self_adjoint(f)
    scale = float(np.max(np.abs(v.coeffs)))
    n = WINDING_INITIAL
    while True:
        theta = 2.0 * math.pi * np.arange(n + 1) / n
        values = np.asarray(series_value(v, np.exp(1j * theta)))
        modulus = np.abs(values)
        low = float(np.min(modulus))
        if low < config.winding_refusal * scale:
            raise WindingRefusedError(low / scale, config.winding_refusal)
        steps = np.angle(values[1:] / values[:-1])
        if np.max(np.abs(steps)) < MAX_PHASE_STEP:
            break
        if 2 * n > config.zero_grid_max:
            msg = f"phase increments still exceed pi/2 on a grid of {n} angles"
            raise ConvergenceError(msg)
        n *= 2
    winding = round(float(np.sum(steps)) / (2.0 * math.pi))
    logger.debug("Winding %d on %d angles, min |v| = %.3e", winding, n, low)
    return WindingReport(winding=winding, min_modulus_on_circle=low, grid_size=n)


def closed_disk_counts(solution: PolynomialSolution) -> tuple[int, int]:
    """Zeros of a Lamé polynomial's eta-polynomial in the open and in the closed unit disk.

    The zeta-series coefficients of the polynomial are, up to a constant, the
    Plain coefficients of the same function, so their roots in eta are the
    zeros of its Wangerin series.
    """
    if solution.p > 3:  # noqa: PLR2004
        msg = f"closed-disk counts are only provided for p <= 3, got p={solution.p}"
        raise DomainError(msg)
    c = np.trim_zeros(solution.coeffs, "b")
    if c.size <= 1:
        return 0, 0
    radii = np.abs(np.polynomial.polynomial.polyroots(c))
    return int(np.sum(radii < 1.0 - ROOT_SLACK)), int(np.sum(radii <= 1.0 + ROOT_SLACK))


def ode_residual_segment(f: SeriesEigenfunction, u: ArrayLike, step: float = 1e-3) -> Any:
    """|w'' + (h - nu(nu+1)/sn^2 u) w| on the segment, w'' by a five-point stencil."""
    us = np.asarray(u, dtype=float)
    w = [np.asarray(evaluate_on_segment(f, us + j * step)) for j in (-2, -1, 0, 1, 2)]
    second = (-w[0] + 16.0 * w[1] - 30.0 * w[2] + 16.0 * w[3] - w[4]) / (12.0 * step**2)
    sn = np.asarray(jacobi(us, f.params.modulus).sn)
    nu = f.params.nu
    return np.abs(second + (f.h - nu * (nu + 1.0) / sn**2) * w[2])[()]


def ode_residual_real_axis(f: SeriesEigenfunction, x: ArrayLike, step: float = 1e-4) -> Any:
    """|w'' + (h - nu(nu+1) k^2 sn^2 x) w| on the real axis by central differences."""
    xs = np.asarray(x, dtype=float)
    left, mid, right = (np.asarray(evaluate_on_real_axis(f, xs + j * step)) for j in (-1, 0, 1))
    second = (left - 2.0 * mid + right) / step**2
    sn = np.asarray(jacobi(xs, f.params.modulus).sn)
    nu = f.params.nu
    potential = nu * (nu + 1.0) * f.params.modulus.k ** 2 * sn**2
    return np.abs(second + (f.h - potential) * mid)[()]


def real_axis_min_modulus(f: SeriesEigenfunction, n: int = 400) -> float:
    """Smallest |w| over one period [0, 2K) of the real axis."""
    x = 2.0 * f.params.modulus.bigK * np.arange(n) / n
    return float(np.min(np.abs(evaluate_on_real_axis(f, x))))
