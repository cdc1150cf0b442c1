"""
Young functions and their Legendre transforms.

A Young function theta is convex, nondecreasing, theta(0) = 0 and grows
faster than any linear function. The linear case theta(x) = x is kept as a
separate variant because its conjugate is infinite.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import DomainError, LinearCaseError

logger = logging.getLogger(__name__)

LEGENDRE_RTOL = 1e-12
MAX_BRACKET = 1e300


class YoungKind(str, Enum):
    """Variants of Young function supported by the catalog."""

    LINEAR = "linear"
    POWER = "power"
    TABLE = "table"


@dataclass(frozen=True)
class YoungSpec:
    """A Young function (or the linear limit case).

    Power(p) is c * x**p with c = ``coefficient`` (1 unless built by
    ``conjugate``). Tabulated specs interpolate their sample table linearly
    and are only defined on ``[0, r_max]``.
    """

    kind: YoungKind = YoungKind.LINEAR
    p: float = 1.0
    coefficient: float = 1.0
    points: Tuple[Tuple[float, float], ...] = ()
    tol: float = 1e-9

    def __post_init__(self):
        errors = []
        if self.kind == YoungKind.POWER:
            if not self.p > 1.0:
                errors.append(f"power exponent must be > 1, got {self.p}")
            if not self.coefficient > 0.0:
                errors.append(f"power coefficient must be > 0, got {self.coefficient}")
        elif self.kind == YoungKind.TABLE:
            errors.extend(_table_problems(self.points, self.tol))
        if errors:
            raise ValueError(f"Young function validation failed: {'; '.join(errors)}")

    @classmethod
    def linear(cls) -> 'YoungSpec':
        return cls(kind=YoungKind.LINEAR)

    @classmethod
    def power(cls, p: float, coefficient: float = 1.0) -> 'YoungSpec':
        return cls(kind=YoungKind.POWER, p=float(p), coefficient=float(coefficient))

    @classmethod
    def tabulated(cls, points: Iterable[Sequence[float]]) -> 'YoungSpec':
        table = tuple((float(r), float(y)) for r, y in points)
        return cls(kind=YoungKind.TABLE, points=table)

    @property
    def r_max(self) -> float:
        """Right end of the evaluation domain."""
        if self.kind == YoungKind.TABLE:
            return self.points[-1][0]
        return math.inf

    @property
    def is_linear(self) -> bool:
        return self.kind == YoungKind.LINEAR

    def __call__(self, x: float) -> float:
        return eval_theta(self, x)

    def describe(self) -> str:
        if self.kind == YoungKind.POWER:
            if self.coefficient != 1.0:
                return f"power(p={self.p:g}, c={self.coefficient:g})"
            return f"power(p={self.p:g})"
        if self.kind == YoungKind.TABLE:
            return f"table({len(self.points)} points, r_max={self.r_max:g})"
        return "linear"


def _table_problems(points: Tuple[Tuple[float, float], ...], tol: float) -> list:
    problems = []
    if len(points) < 3:
        return ["table needs at least 3 points"]
    r = np.array([pt[0] for pt in points])
    y = np.array([pt[1] for pt in points])
    if r[0] != 0.0 or y[0] != 0.0:
        problems.append("table must start at (0, 0)")
    if np.any(np.diff(r) <= 0):
        problems.append("table abscissae must be strictly increasing")
        return problems
    if np.any(np.diff(y) < -tol):
        problems.append("table values must be nondecreasing")
    slopes = np.diff(y) / np.diff(r)
    if np.any(np.diff(slopes) < -tol):
        problems.append("table is not convex")
    if not y[-1] / r[-1] > y[-2] / r[-2]:
        problems.append("table is not superlinear at its two largest abscissae")
    return problems


def eval_theta(theta: YoungSpec, x: float) -> float:
    """Evaluate theta(x).

    Raises:
        DomainError: x < 0, or x beyond the table of a Tabulated spec.
    """
    if x < 0:
        raise DomainError(f"Young function evaluated at negative argument {x}")
    if theta.kind == YoungKind.LINEAR:
        return float(x)
    if theta.kind == YoungKind.POWER:
        return theta.coefficient * float(x) ** theta.p
    if x > theta.r_max * (1.0 + 1e-12):
        raise DomainError(f"argument {x} outside table domain [0, {theta.r_max}]")
    r, y = zip(*theta.points)
    return float(np.interp(x, r, y))


def theta_values(theta: YoungSpec, xs: Sequence[float]) -> np.ndarray:
    """Vectorized eval_theta."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 0):
        raise DomainError("Young function evaluated at negative argument")
    if theta.kind == YoungKind.LINEAR:
        return xs.copy()
    if theta.kind == YoungKind.POWER:
        return theta.coefficient * xs ** theta.p
    if np.any(xs > theta.r_max * (1.0 + 1e-12)):
        raise DomainError(f"argument outside table domain [0, {theta.r_max}]")
    r, y = zip(*theta.points)
    return np.interp(xs, r, y)


def legendre(theta: YoungSpec, x: float) -> float:
    """Legendre transform theta*(x) = sup_{t >= 0} (t x - theta(t)).

    The objective is concave in t, so a bounded scalar search on
    [0, T] with theta(T) >= T x finds the maximizer.

    Raises:
        LinearCaseError: theta is the linear case.
    """
    if theta.is_linear:
        raise LinearCaseError("the Legendre transform of theta(x) = x is infinite")
    if x < 0:
        raise DomainError(f"Legendre transform evaluated at negative argument {x}")

    def objective(t: float) -> float:
        return t * x - eval_theta(theta, t)

    hi = min(1.0, theta.r_max)
    while eval_theta(theta, hi) < hi * x and hi < theta.r_max and hi < MAX_BRACKET:
        hi = min(hi * 2.0, theta.r_max)
    result = minimize_scalar(lambda t: -objective(t), bounds=(0.0, hi), method='bounded',
                             options={'xatol': LEGENDRE_RTOL * (1.0 + x)})
    best = max(0.0, -float(result.fun), objective(hi))
    if theta.kind == YoungKind.TABLE:
        # the supremum of a concave piecewise-linear objective sits on a vertex
        best = max(best, max(r * x - y for r, y in theta.points))
    return best


def conjugate(theta: YoungSpec) -> YoungSpec:
    """Closed-form conjugate of a Power spec.

    theta(x) = c x^p has theta*(x) = c' x^q with q = p/(p-1) and
    c' = (p-1) c (c p)^(-q).
    """
    if theta.is_linear:
        raise LinearCaseError("the linear Young function has no finite conjugate")
    if theta.kind != YoungKind.POWER:
        raise ValueError("closed-form conjugate is only available for power Young functions")
    p, c = theta.p, theta.coefficient
    q = p / (p - 1.0)
    return YoungSpec.power(q, (p - 1.0) * c * (c * p) ** (-q))


def halving_holds(theta: YoungSpec, base: float, n_max: int = 10) -> bool:
    """Check theta(b 2^n) <= theta(b 2^(n+1)) / 2 for n < n_max."""
    for n in range(n_max):
        upper = base * 2.0 ** (n + 1)
        if upper > theta.r_max:
            break
        lhs = eval_theta(theta, base * 2.0 ** n)
        rhs = 0.5 * eval_theta(theta, upper)
        if lhs > rhs + theta.tol * (1.0 + abs(rhs)):
            logger.debug(f"Halving fails at n={n}: {lhs} > {rhs}")
            return False
    return True
