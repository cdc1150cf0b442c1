"""
Sample-based growth norms and growth-bound fitting.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError
from .young import YoungSpec, eval_theta, legendre

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GrowthBound:
    """Evidence that y <= A + theta(m r) on a sample set."""

    m: float
    A: float

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"growth bound scale must be positive, got {self.m}")

    def to_dict(self) -> dict:
        return {'m': self.m, 'A': self.A}


def theta_norm(values: Iterable[Tuple[complex, complex]], theta: YoungSpec, m: float) -> float:
    """Sampled ||f||_{theta,m} = max |v| exp(-theta(m |z|)).

    This is a lower bound for the true supremum norm over the plane.
    """
    best = 0.0
    for z, v in values:
        weight = -eval_theta(theta, m * abs(z))
        if v == 0:
            continue
        best = max(best, math.exp(math.log(abs(v)) + weight))
    return best


def conjugate_norm(values: Iterable[Tuple[complex, complex]], theta: YoungSpec, m: float) -> float:
    """Sampled norm of the test-function space, weight exp(-theta*(|z|/m))."""
    best = 0.0
    for z, v in values:
        if v == 0:
            continue
        best = max(best, math.exp(math.log(abs(v)) - legendre(theta, abs(z) / m)))
    return best


def _bound_constant(points: Sequence[Tuple[float, float]], theta: YoungSpec, m: float) -> float:
    try:
        return max(y - eval_theta(theta, m * r) for r, y in points)
    except DomainError:
        return math.inf


def fit_growth_bound(points: Sequence[Tuple[float, float]], theta: YoungSpec,
                     m_grid: Sequence[float]) -> Optional[GrowthBound]:
    """Fit y <= A + theta(m r) over a grid of scale indices.

    Args:
        points: Samples (r, y).
        theta: Young function.
        m_grid: Candidate scale indices.

    Returns:
        The (m, A) with the smallest A when every candidate is evaluable,
        otherwise the smallest m whose A is finite; None when no candidate is.
    """
    if not points:
        raise ValueError("fit_growth_bound needs at least one sample point")
    if not m_grid:
        raise ValueError("fit_growth_bound needs a nonempty m grid")

    candidates: List[Tuple[float, float]] = []
    for m in sorted(m_grid):
        candidates.append((m, _bound_constant(points, theta, m)))

    finite = [(m, A) for m, A in candidates if math.isfinite(A)]
    if not finite:
        return None
    if len(finite) == len(candidates):
        m, A = min(finite, key=lambda item: (item[1], item[0]))
    else:
        m, A = finite[0]
    logger.debug(f"Fitted growth bound m={m}, A={A} over {len(points)} samples")
    return GrowthBound(m=float(m), A=float(A))


def growth_is_stable(history: Sequence[float], rel_tol: float = 0.1) -> bool:
    """True when the last constant of a doubling sequence stays within rel_tol."""
    values = [a for a in history if a is not None]
    if len(values) < 2:
        return True
    prev, last = values[-2], values[-1]
    if not (math.isfinite(prev) and math.isfinite(last)):
        return False
    return abs(last - prev) <= rel_tol * max(1.0, abs(prev))


def log_weights(theta: YoungSpec, radii: Sequence[float], p: float) -> np.ndarray:
    """theta(p r) for each radius, used as log-weights by sequence norms."""
    return np.array([eval_theta(theta, p * r) for r in radii], dtype=float)
