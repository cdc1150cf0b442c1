"""
Series synthesis for both expansions and the mean-periodicity residual.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..entire.catalog import ExpPolyTerm, exp_poly_eval
from ..entire.streams import ExpPolyStream, TaylorStream
from ..entire.zeros import MultiplicityVariety
from ..functionals import AnalyticFunctional, convolve
from ..newton.closed_form import expansion_poly, exponential_divided_differences
from .coefficients import ExpansionCoefficients, Flavor

logger = logging.getLogger(__name__)

PACKET_FLAG_RATIO = 1e-10


class SynthesizedFunction:
    """Closed form sum_k p_k(z) exp(alpha_k z) of a synthesized series."""

    def __init__(self, terms: Sequence[ExpPolyTerm], label: str = ""):
        self.terms: List[ExpPolyTerm] = [(np.asarray(p, dtype=complex), complex(lam)) for p, lam in terms]
        self.label = label

    @classmethod
    def from_d(cls, d: ExpansionCoefficients) -> 'SynthesizedFunction':
        """p_k(z) = sum_l d_{k,l} z^l / l!."""
        _require(d, Flavor.INTERPOLATING)
        terms = []
        for row, (alpha, m) in zip(d.table.values, d.variety):
            factorials = np.cumprod(np.concatenate([[1.0], np.arange(1, m)]))[:m]
            terms.append((row / factorials, alpha))
        return cls(terms, label="interpolating synthesis")

    @classmethod
    def from_c(cls, c: ExpansionCoefficients) -> 'SynthesizedFunction':
        """Regroup the general packets by exponential through P_{k,j,l}."""
        _require(c, Flavor.GENERAL)
        V = c.variety
        polys = [np.zeros(m, dtype=complex) for _, m in V]
        for k, l, value in c.rows():
            if value == 0:
                continue
            for j in range(k + 1):
                poly = expansion_poly(V, k, j, l)
                polys[j][:len(poly)] += value * poly
        return cls(list(zip(polys, V.alphas)), label="general synthesis")

    def stream(self) -> ExpPolyStream:
        return ExpPolyStream(self.terms, label=self.label)

    def __call__(self, z: complex) -> complex:
        return exp_poly_eval(self.terms, complex(z), 0)

    def eval_many(self, zs: Sequence[complex]) -> np.ndarray:
        return np.array([self(z) for z in zs], dtype=complex)


def _require(coefficients: ExpansionCoefficients, flavor: Flavor) -> None:
    if coefficients.flavor != flavor:
        raise ValueError(f"expected {flavor.value} coefficients, got {coefficients.flavor.value}")


def synthesize_general(V: MultiplicityVariety, c: ExpansionCoefficients,
                       z: complex) -> Tuple[complex, List[complex]]:
    """Partial sum of the general expansion at z, packet by packet.

    Each packet is sum_l c_{k,l} b_{k,l}(z), with b_{k,l}(z) the divided
    differences of exp(z .) on V; packets are never split.

    Returns:
        (value, running sums after each packet).
    """
    _require(c, Flavor.GENERAL)
    W = V.prefix(c.K)
    if not len(W):
        return 0j, []
    b = exponential_divided_differences(W, complex(z))
    running, partials = 0j, []
    for k, row in enumerate(c.table.values):
        running += complex(np.dot(row, b.values[k]))
        partials.append(running)
    return running, partials


def synthesize_interpolating(V: MultiplicityVariety, d: ExpansionCoefficients, z: complex) -> complex:
    """sum_k exp(z alpha_k) sum_l d_{k,l} z^l / l! over the truncation."""
    _require(d, Flavor.INTERPOLATING)
    z = complex(z)
    total = 0j
    for row, (alpha, m) in zip(d.table.values, V.prefix(d.K)):
        inner = 0j
        term = 1.0 + 0j
        for l in range(m):
            inner += row[l] * term
            term *= z / (l + 1)
        total += inner * np.exp(z * alpha)
    return complex(total)


def residual_mean_periodic(T: AnalyticFunctional, f_synth: Union[SynthesizedFunction, TaylorStream],
                           grid: Sequence[complex], threads: Optional[int] = None) -> float:
    """max over the grid of |(T * f)(z)|.

    Raises:
        ValueError: empty grid.
    """
    if not len(grid):
        raise ValueError("residual grid is empty")
    stream = f_synth.stream() if isinstance(f_synth, SynthesizedFunction) else f_synth

    def residual(z: complex) -> float:
        return abs(convolve(T, stream, z))

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            values = list(executor.map(residual, grid))
    else:
        values = [residual(z) for z in grid]
    worst = max(values)
    logger.debug(f"Residual of {T.label} over {len(values)} points: {worst:.3g}")
    return worst


@dataclass
class ConvergenceReport:
    """Packet magnitudes of a general synthesis and their fitted decay."""

    packet_magnitudes: List[float]
    value_magnitude: float
    decay_rate: Optional[float]
    flagged: bool
    points: int = 0
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'packets': [{'k': k, 'magnitude': m} for k, m in enumerate(self.packet_magnitudes)],
            'value_magnitude': self.value_magnitude,
            'fitted_decay': self.decay_rate,
            'flagged': self.flagged,
            'points': self.points,
            **self.extra,
        }


def _fit_decay(magnitudes: Sequence[float]) -> Optional[float]:
    """Geometric ratio from a least-squares line through log magnitudes."""
    ks = [k for k, m in enumerate(magnitudes) if m > 0]
    if len(ks) < 2:
        return None
    logs = [math.log(magnitudes[k]) for k in ks]
    slope, _ = np.polyfit(ks, logs, 1)
    return float(math.exp(slope))


def convergence_report(V: MultiplicityVariety, c: ExpansionCoefficients, zs: Sequence[complex],
                       flag_ratio: float = PACKET_FLAG_RATIO) -> ConvergenceReport:
    """Per-packet magnitudes (max over zs) of the general synthesis.

    The report is flagged when the last packet exceeds ``flag_ratio`` of
    the synthesized value.
    """
    if not len(zs):
        raise ValueError("convergence report needs at least one point")
    magnitudes = np.zeros(c.K)
    value_magnitude = 0.0
    for z in zs:
        value, partials = synthesize_general(V, c, z)
        packets = np.abs(np.diff(np.concatenate([[0j], partials])))
        magnitudes = np.maximum(magnitudes, packets)
        value_magnitude = max(value_magnitude, abs(value))
    last = float(magnitudes[-1]) if len(magnitudes) else 0.0
    flagged = last > flag_ratio * max(value_magnitude, 1e-300)
    decay = _fit_decay(list(magnitudes))
    if flagged:
        logger.warning(f"Last packet {last:.3g} is not negligible against {value_magnitude:.3g}")
    return ConvergenceReport([float(m) for m in magnitudes], value_magnitude, decay, flagged, len(zs))
