"""
Weighted sequence norms of coefficients, jets and divided differences.

All sums are taken on log-magnitudes, the weights exp(theta(p|alpha_k|))
overflow long before the norms do.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from ..entire.zeros import MultiplicityVariety
from ..growth import YoungSpec, eval_theta
from ..newton.tables import JetTable
from .coefficients import ExpansionCoefficients, Flavor

logger = logging.getLogger(__name__)

GROWTH_THRESHOLD = 1e-6


def _log_terms(values: JetTable, V: MultiplicityVariety, theta: YoungSpec, p: float,
               general: bool) -> List[float]:
    prefix = V.prefix_sums()
    logs = []
    for k, l, value in values.rows():
        if value == 0:
            continue
        modulus = abs(V[k][0])
        log_term = eval_theta(theta, p * modulus) + math.log(abs(value))
        if general:
            log_term -= (prefix[k] + l) * math.log1p(modulus)
        logs.append(log_term)
    return logs


def _norm(c: ExpansionCoefficients, V: Optional[MultiplicityVariety], theta: YoungSpec, p: float,
          flavor: Flavor) -> float:
    if c.flavor != flavor:
        raise ValueError(f"expected {flavor.value} coefficients, got {c.flavor.value}")
    if not p > 0:
        raise ValueError(f"norm scale p must be positive, got {p}")
    V = c.variety if V is None else V.prefix(c.K)
    logs = _log_terms(c.table, V, theta, p, general=flavor == Flavor.GENERAL)
    if not logs:
        return 0.0
    total = float(logsumexp(logs))
    return math.exp(total) if total < 709.0 else math.inf


def coeff_norm_general(c: ExpansionCoefficients, V: Optional[MultiplicityVariety], theta: YoungSpec,
                       p: float) -> float:
    """sum_k exp(theta(p|alpha_k|)) sum_l |c_{k,l}| (1+|alpha_k|)^-(m_0+...+m_{k-1}+l)."""
    return _norm(c, V, theta, p, Flavor.GENERAL)


def coeff_norm_interpolating(d: ExpansionCoefficients, V: Optional[MultiplicityVariety], theta: YoungSpec,
                             p: float) -> float:
    """sum_k exp(theta(p|alpha_k|)) sum_l |d_{k,l}|."""
    return _norm(d, V, theta, p, Flavor.INTERPOLATING)


def jet_norm(a: JetTable, theta: YoungSpec, m: float) -> float:
    """sup_k sum_l |a_{k,l}| exp(-theta(m|alpha_k|))."""
    best = 0.0
    for row, (alpha, _) in zip(a.values, a.variety):
        size = float(np.sum(np.abs(row)))
        if size == 0:
            continue
        best = max(best, math.exp(math.log(size) - eval_theta(theta, m * abs(alpha))))
    return best


def divided_difference_norm(b: JetTable, theta: YoungSpec, m: float) -> float:
    """sup_{k,l} |b_{k,l}| (1+|alpha_k|)^(m_0+...+m_{k-1}+l) exp(-theta(m|alpha_k|))."""
    prefix = b.variety.prefix_sums()
    best = -math.inf
    for k, l, value in b.rows():
        if value == 0:
            continue
        modulus = abs(b.variety[k][0])
        log_term = math.log(abs(value)) + (prefix[k] + l) * math.log1p(modulus) - eval_theta(theta, m * modulus)
        best = max(best, log_term)
    if best == -math.inf:
        return 0.0
    return math.exp(best) if best < 709.0 else math.inf


@dataclass
class NormGrowth:
    """Norms across increasing truncations."""

    truncations: List[int]
    norms: List[float]
    changes: List[float]
    diverging: bool
    threshold: float

    def to_dict(self) -> Dict[str, object]:
        return {
            'samples': [{'K': K, 'norm': n} for K, n in zip(self.truncations, self.norms)],
            'relative_changes': self.changes,
            'diverging': self.diverging,
            'threshold': self.threshold,
        }


def norm_growth(values_by_K: Union[Mapping[int, float], Sequence[Tuple[int, float]]],
                threshold: float = GROWTH_THRESHOLD) -> NormGrowth:
    """Flag a norm that keeps moving when the truncation grows.

    The norm is flagged as diverging when any relative change between
    consecutive truncations exceeds ``threshold``.
    """
    items = sorted(values_by_K.items() if isinstance(values_by_K, Mapping) else values_by_K)
    if not items:
        raise ValueError("norm_growth needs at least one truncation")
    truncations = [int(K) for K, _ in items]
    norms = [float(n) for _, n in items]
    changes = []
    for prev, last in zip(norms, norms[1:]):
        if math.isinf(last) or math.isinf(prev):
            changes.append(math.inf)
        else:
            changes.append(abs(last - prev) / max(abs(prev), 1e-300))
    diverging = any(change > threshold for change in changes)
    if diverging:
        logger.warning(f"Sequence norm is not settling: relative changes {changes}")
    return NormGrowth(truncations, norms, changes, diverging, threshold)
