"""
Counting functions n(z, r) and N(z, r) of a multiplicity variety.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.integrate import quad

from ..entire.zeros import MultiplicityVariety

logger = logging.getLogger(__name__)

RADIUS_SLACK = 1e-12
CENTER_TOL = 1e-14


def _distances(V: MultiplicityVariety, z: complex) -> np.ndarray:
    return np.abs(V.alphas - complex(z)) if len(V) else np.zeros(0)


def little_n(V: MultiplicityVariety, z: complex, r: float) -> int:
    """n(z, r): multiplicities of the points with |z - alpha_k| <= r."""
    dist = _distances(V, z)
    mults = np.asarray(V.multiplicities, dtype=int)
    return int(np.sum(mults[dist <= r + RADIUS_SLACK * (1.0 + r)]))


def big_N(V: MultiplicityVariety, z: complex, r: float) -> float:
    """N(z, r) = sum_{0<|z-alpha|<=r} m ln(r/|z-alpha|) + n(z, 0) ln r."""
    if r <= 0:
        raise ValueError(f"N(z, r) needs r > 0, got {r}")
    dist = _distances(V, z)
    mults = np.asarray(V.multiplicities, dtype=float)
    at_center = dist <= CENTER_TOL * (1.0 + abs(z))
    inside = (~at_center) & (dist <= r + RADIUS_SLACK * (1.0 + r))
    total = float(np.sum(mults[inside] * np.log(r / dist[inside])))
    return total + float(np.sum(mults[at_center])) * math.log(r)


def big_N_integral(V: MultiplicityVariety, z: complex, r: float) -> float:
    """N(z, r) from its integral definition, by adaptive quadrature."""
    n0 = little_n(V, z, 0.0)
    dist = _distances(V, z)
    breaks = sorted(float(d) for d in dist if 0 < d < r)

    def integrand(t: float) -> float:
        return (little_n(V, z, t) - n0) / t

    total = 0.0
    edges = [0.0] + breaks + [r]
    for lo, hi in zip(edges, edges[1:]):
        if hi > lo:
            value, _ = quad(integrand, lo, hi, limit=200)
            total += value
    return total + n0 * math.log(r)


@dataclass
class CountingProfile:
    """Samples (r, n(z, r), N(z, r)) around a center."""

    center: complex
    samples: List[Tuple[float, int, float]] = field(default_factory=list)

    def to_rows(self) -> List[Dict[str, float]]:
        return [{'r': r, 'n': n, 'N': N} for r, n, N in self.samples]


def counting_profile(V: MultiplicityVariety, z: complex, radii: Sequence[float]) -> CountingProfile:
    """Counting functions sampled at the given positive radii."""
    samples = [(float(r), little_n(V, z, r), big_N(V, z, r)) for r in sorted(radii) if r > 0]
    return CountingProfile(center=complex(z), samples=samples)


def sample_radii(V: MultiplicityVariety) -> List[float]:
    """Positive moduli of V plus geometric midpoints between consecutive moduli."""
    moduli = sorted({round(abs(a), 12) for a, _ in V.points if abs(a) > 0})
    radii = set(moduli)
    for lo, hi in zip(moduli, moduli[1:]):
        radii.add(math.sqrt(lo * hi))
    if not radii:
        radii.add(1.0)
    return sorted(radii)
