"""Grid specifications accepted by the `--grid` and `--klist` options.

- Linear grids: `start:end:count`, in units of K. `0.1:1.9:19` is u = 0.1K, ..., 1.9K.
- Strip points: `x,y;x,y;...`, x in units of K and y in units of K'.
- Lists: `0.1,0.05`.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from lamekit.errors import DomainError

FloatArray = NDArray[np.float64]


def _number(text: str, spec: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        msg = f"malformed grid spec {spec!r}: {text!r} is not a number"
        raise DomainError(msg) from exc


def parse_linear(spec: str) -> FloatArray:
    """`start:end:count` as an array of multipliers (not yet scaled by K)."""
    parts = spec.split(":")
    if len(parts) != 3:  # noqa: PLR2004
        msg = f"malformed grid spec {spec!r}: expected start:end:count"
        raise DomainError(msg)
    start, end = _number(parts[0], spec), _number(parts[1], spec)
    count = _number(parts[2], spec)
    if count < 1 or count != int(count):
        msg = f"malformed grid spec {spec!r}: count must be a positive integer"
        raise DomainError(msg)
    return np.linspace(start, end, int(count))


def parse_pairs(spec: str) -> tuple[FloatArray, FloatArray]:
    """`x,y;x,y;...` as arrays of x and y multipliers."""
    xs, ys = [], []
    for item in filter(None, (s.strip() for s in spec.split(";"))):
        coords = item.split(",")
        if len(coords) != 2:  # noqa: PLR2004
            msg = f"malformed strip point {item!r} in {spec!r}: expected x,y"
            raise DomainError(msg)
        xs.append(_number(coords[0], spec))
        ys.append(_number(coords[1], spec))
    if not xs:
        msg = f"malformed grid spec {spec!r}: no points"
        raise DomainError(msg)
    return np.array(xs), np.array(ys)


def parse_list(spec: str) -> list[float]:
    """Comma-separated numbers."""
    values = [_number(s, spec) for s in spec.split(",") if s.strip()]
    if not values:
        msg = f"empty list {spec!r}"
        raise DomainError(msg)
    return values
