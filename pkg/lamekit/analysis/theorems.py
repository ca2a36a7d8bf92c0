"""Numerical checks of the comparison theorems and of the k -> 0 limit.

`verify_comparison` evaluates both sides of each relation independently:

- C1: Floquet eigenvalues h_m(nu+1, nu) against a merge of Wangerin eigenvalues
  H^(1)(nu) and H^(2)(-nu-1) (the discriminant against the truncated operators).
- C2: interleaving of H_m(nu) and H_m(-nu-1) within one kind.
- C3: interleaving of the two kinds at the same nu.

Every relation becomes a `Relation` row with its margin, so a failing report
names the offending indices.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from lamekit.config import DEFAULT_CONFIG, SolverConfig
from lamekit.elliptic import modulus_from_k
from lamekit.errors import DomainError
from lamekit.floquet import floquet_eigenvalues
from lamekit.recurrence import LameParams
from lamekit.special import gegenbauer_limit
from lamekit.spectra import Kind, wangerin_eigenvalues
from lamekit.wangerin import eigenfunction, evaluate_on_segment

logger = logging.getLogger(__name__)

Theorem = Literal["C1", "C2", "C3"]
"""Which comparison theorem to check."""

CROSS_METHOD_TOL = 1e-7  # Floquet against Wangerin, relative to max(1, |h|)
SAME_METHOD_TOL = 1e-8  # Wangerin against Wangerin
INTEGER_NU_TOL = 1e-12
LIMIT_S_RANGE = (0.3 * math.pi, 0.7 * math.pi)
LIMIT_K_MAX = 0.2
KINDS: tuple[Kind, ...] = (1, 2)

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class Relation:
    """One checked relation lhs < rhs or lhs = rhs.

    Attributes:
        label: Human-readable form such as "h_2(nu+1,nu) = H2_1(-nu-1)".
        relation: "<" or "=".
        lhs: Left value.
        rhs: Right value.
        margin: rhs - lhs for "<", |rhs - lhs| for "=".
        passed: Whether the relation holds.
    """

    label: str
    relation: Literal["<", "="]
    lhs: float
    rhs: float
    margin: float
    passed: bool


@dataclass(frozen=True)
class ComparisonReport:
    """All relations checked for one theorem at one (nu, k)."""

    theorem: Theorem
    nu: float
    k: float
    case: str
    relations: list[Relation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Conjunction of all relations."""
        return all(r.passed for r in self.relations)

    @property
    def failures(self) -> list[Relation]:
        """The relations that do not hold."""
        return [r for r in self.relations if not r.passed]


@dataclass(frozen=True)
class LimitReport:
    """Distance to the circular limit along a sequence of moduli.

    Attributes:
        kindj: Wangerin kind.
        m: Eigenvalue index.
        nu: Degree parameter.
        ks: The moduli, decreasing.
        errors: Max deviation on s in [0.3 pi, 0.7 pi] for each k.
        ratios: errors[i] / errors[i + 1].
    """

    kindj: Kind
    m: int
    nu: float
    ks: list[float]
    errors: list[float]
    ratios: list[float]


def _less(label: str, lhs: float, rhs: float) -> Relation:
    return Relation(label=label, relation="<", lhs=lhs, rhs=rhs, margin=rhs - lhs, passed=rhs - lhs > 0.0)


def _equal(label: str, lhs: float, rhs: float, tol: float) -> Relation:
    gap = abs(rhs - lhs)
    return Relation(label=label, relation="=", lhs=lhs, rhs=rhs, margin=gap, passed=gap <= tol * max(1.0, abs(lhs)))


def _chain(labelled: list[tuple[str, float]]) -> list[Relation]:
    return [_less(f"{a} < {b}", va, vb) for (a, va), (b, vb) in zip(labelled, labelled[1:], strict=False)]


def _wangerin(kindj: Kind, nu: float, k: float, m_max: int, config: SolverConfig) -> FloatArray:
    params = LameParams(nu=nu, modulus=modulus_from_k(k))
    return np.array([pair.h for pair in wangerin_eigenvalues(kindj, params, m_max, config=config)])


def _is_integer(nu: float) -> bool:
    return abs(nu - round(nu)) < INTEGER_NU_TOL


def _verify_c1(nu: float, k: float, depth: int, config: SolverConfig) -> tuple[str, list[Relation]]:
    p = math.ceil(abs(nu))
    h = floquet_eigenvalues(nu + 1.0, LameParams(nu=nu, modulus=modulus_from_k(k)), depth, config=config)
    own = _wangerin(1, nu, k, depth + p, config)
    reflected = _wangerin(2, -nu - 1.0, k, depth + p, config)
    if nu >= 0.0:
        case, (lower, lower_name), (upper, upper_name) = "a", (reflected, "H2_{}(-nu-1)"), (own, "H1_{}(nu)")
    else:
        case, (lower, lower_name), (upper, upper_name) = "b", (own, "H1_{}(nu)"), (reflected, "H2_{}(-nu-1)")
    relations = []
    for m in range(depth + 1):
        if m < p:
            i, values, name = m, lower, lower_name
        elif (m - p) % 2 == 0:
            i, values, name = (m - p) // 2, upper, upper_name
        else:
            i, values, name = p + (m - p - 1) // 2, lower, lower_name
        relations.append(_equal(f"h_{m}(nu+1,nu) = {name.format(i)}", float(h[m]), float(values[i]), CROSS_METHOD_TOL))
    if _is_integer(nu):
        case = f"{case}+c"
        relations += _chain([(f"h_{m}", float(h[m])) for m in range(min(p, depth) + 1)])
        for m in range(p, depth, 2):
            relations.append(_equal(f"h_{m} = h_{m + 1}", float(h[m]), float(h[m + 1]), CROSS_METHOD_TOL))
            if m + 2 <= depth:
                relations.append(_less(f"h_{m + 1} < h_{m + 2}", float(h[m + 1]), float(h[m + 2])))
    return case, relations


def _verify_c2(nu: float, k: float, depth: int, config: SolverConfig) -> tuple[str, list[Relation]]:
    base = -nu - 1.0 if nu > -0.5 else nu
    p = math.floor(-base - 0.5)
    at_boundary = abs(base + p + 0.5) < INTEGER_NU_TOL
    relations: list[Relation] = []
    for kindj in KINDS:
        low = _wangerin(kindj, base, k, p + depth + 1, config)
        high = _wangerin(kindj, -base - 1.0, k, depth + 1, config)
        tag = f"H{kindj}"
        for i in range(depth + 1):
            upper = (f"{tag}_{i}(-nu-1)", float(high[i]))
            if at_boundary:
                if p + i - 1 >= 0:
                    relations.append(_less(f"{tag}_{p + i - 1}(nu) < {upper[0]}", float(low[p + i - 1]), upper[1]))
                relations.append(_equal(f"{upper[0]} = {tag}_{p + i}(nu)", upper[1], float(low[p + i]), SAME_METHOD_TOL))
            else:
                relations.append(_less(f"{tag}_{p + i}(nu) < {upper[0]}", float(low[p + i]), upper[1]))
                relations.append(_less(f"{upper[0]} < {tag}_{p + i + 1}(nu)", upper[1], float(low[p + i + 1])))
    return ("b" if at_boundary else "a"), relations


def _verify_c3(nu: float, k: float, depth: int, config: SolverConfig) -> tuple[str, list[Relation]]:
    first = _wangerin(1, nu, k, depth + 1, config)
    second = _wangerin(2, nu, k, depth + 1, config)

    def entry(kindj: Kind, m: int) -> tuple[str, float]:
        return f"H{kindj}_{m}", float(first[m] if kindj == 1 else second[m])

    if nu > -1.5:  # noqa: PLR2004
        return "a", _chain([entry(j, m) for m in range(depth + 1) for j in KINDS])
    p = math.floor(-nu - 0.5)
    relations: list[Relation] = []
    sequence: list[tuple[str, float]] = []
    if abs(nu + p + 0.5) < INTEGER_NU_TOL:
        for m in range(min(p, depth + 1)):
            relations.append(_equal(f"H1_{m} = H2_{m}", entry(1, m)[1], entry(2, m)[1], SAME_METHOD_TOL))
            sequence.append(entry(1, m))
        sequence += [entry(j, m) for m in range(p, depth + 1) for j in KINDS]
        relations += _chain(sequence)
        reflected = {j: _wangerin(j, -nu - 1.0, k, depth, config) for j in KINDS}
        for j in KINDS:
            own = first if j == 1 else second
            relations += [
                _equal(f"H{j}_{m + p}(nu) = H{j}_{m}(-nu-1)", float(own[m + p]), float(reflected[j][m]), SAME_METHOD_TOL)
                for m in range(depth + 1 - p)
            ]
        return "c", relations
    for m in range(min(p, depth + 1)):
        pair = [entry(1, m), entry(2, m)] if (m + p) % 2 == 0 else [entry(2, m), entry(1, m)]
        sequence += pair
    sequence += [entry(j, m) for m in range(p, depth + 1) for j in KINDS]
    return "b", _chain(sequence)


def verify_comparison(theorem: Theorem, nu: float, k: float, depth: int = 6, config: SolverConfig = DEFAULT_CONFIG) -> ComparisonReport:
    """Check one comparison theorem at (nu, k) for indices up to depth.

    Args:
        theorem: "C1" (Floquet against Wangerin), "C2" (nu against -nu-1) or "C3" (kind 1 against kind 2).
        nu: Degree parameter.
        k: Modulus in (0, 1).
        depth: Largest index checked.
        config: Solver settings.

    Returns:
        A report with one row per relation; `passed` is their conjunction.

    Raises:
        DomainError: If k is outside (0, 1) or depth is negative.
    """
    if not 0.0 < k < 1.0:
        msg = f"verify_comparison needs 0 < k < 1, got k={k!r}"
        raise DomainError(msg)
    if depth < 0:
        msg = f"depth must be nonnegative, got {depth}"
        raise DomainError(msg)
    checks = {"C1": _verify_c1, "C2": _verify_c2, "C3": _verify_c3}
    case, relations = checks[theorem](nu, k, depth, config)
    report = ComparisonReport(theorem=theorem, nu=nu, k=k, case=case, relations=relations)
    if not report.passed:
        logger.info("%s fails at nu=%r, k=%r: %s", theorem, nu, k, [r.label for r in report.failures])
    return report


def verify_limit(kindj: Kind, m: int, nu: float, k_list: list[float], points: int = 201, config: SolverConfig = DEFAULT_CONFIG) -> LimitReport:
    """Distance between the endpoint-normalized eigenfunction and its k -> 0 limit.

    Each eigenfunction is read in the angle s = pi u / (2K); kind-2 functions are
    multiplied by pi / (2K) so both sides have unit slope at s = pi/2.

    Raises:
        DomainError: If k_list is not strictly decreasing inside (0, 0.2].
    """
    ks = [float(k) for k in k_list]
    if not ks or any(not 0.0 < k <= LIMIT_K_MAX for k in ks) or any(b >= a for a, b in zip(ks, ks[1:], strict=False)):
        msg = f"k_list must be strictly decreasing within (0, {LIMIT_K_MAX}], got {ks}"
        raise DomainError(msg)
    s = np.linspace(*LIMIT_S_RANGE, points)
    limit = np.asarray(gegenbauer_limit(kindj, m, nu, s))
    errors = []
    for k in ks:
        params = LameParams(nu=nu, modulus=modulus_from_k(k))
        f = eigenfunction(kindj, "SelfAdjoint", m, params, "Endpoint", config)
        big_k = params.modulus.bigK
        values = np.asarray(evaluate_on_segment(f, 2.0 * big_k * s / math.pi))
        if kindj == 2:  # noqa: PLR2004
            values = values * math.pi / (2.0 * big_k)
        errors.append(float(np.max(np.abs(values - limit))))
    ratios = [a / b if b > 0.0 else math.inf for a, b in zip(errors, errors[1:], strict=False)]
    return LimitReport(kindj=kindj, m=m, nu=nu, ks=ks, errors=errors, ratios=ratios)
