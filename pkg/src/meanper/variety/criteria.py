"""
Interpolating-variety criteria on finite data.

Both criteria quantify over every point of an infinite variety, so a finite
truncation can only pass or stay inconclusive. A criterion passes when the
fitted constant A stays stable over a doubling sequence of truncation radii.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..entire.catalog import EntireFunctionSpec
from ..entire.zeros import MultiplicityVariety
from ..errors import DerivativeVanishes, EmptyVariety
from ..growth import GrowthBound, YoungSpec, fit_growth_bound, growth_is_stable
from .counting import big_N, sample_radii

logger = logging.getLogger(__name__)

DERIVATIVE_FLOOR = 1e-14
DOUBLING_LEVELS = 3
GROWTH_RTOL = 0.1


class Verdict(str, Enum):
    PASS = "Pass"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class CriterionReport:
    """One fitted growth condition."""

    criterion: str
    bound: Optional[GrowthBound]
    samples: List[Tuple[float, float]]
    history: List[Optional[float]] = field(default_factory=list)
    verdict: Verdict = Verdict.INCONCLUSIVE
    constant_name: str = "A"

    @property
    def fitted_m(self) -> Optional[float]:
        return self.bound.m if self.bound else None

    @property
    def fitted_constant(self) -> Optional[float]:
        if self.bound is None:
            return None
        if self.constant_name == "eps":
            return math.exp(-self.bound.A)
        return self.bound.A

    def to_dict(self) -> Dict[str, Any]:
        return {
            'criterion': self.criterion,
            'fitted_m': self.fitted_m,
            'fitted_A_or_eps': self.fitted_constant,
            'constant': self.constant_name,
            'history': self.history,
            'verdict': self.verdict.value,
            'samples': [[r, y] for r, y in self.samples],
        }


@dataclass
class GeometricReport:
    N0: CriterionReport
    Nzz: CriterionReport
    verdict: Verdict

    def to_dict(self) -> Dict[str, Any]:
        return {'criterion': 'geometric', 'verdict': self.verdict.value,
                'N0': self.N0.to_dict(), 'Nzz': self.Nzz.to_dict()}


@dataclass
class AnalyticReport:
    derivative: CriterionReport
    multiplicity: CriterionReport
    verdict: Verdict

    @property
    def eps(self) -> Optional[float]:
        return self.derivative.fitted_constant

    @property
    def m(self) -> Optional[float]:
        return self.derivative.fitted_m

    def to_dict(self) -> Dict[str, Any]:
        return {'criterion': 'analytic', 'verdict': self.verdict.value, 'eps': self.eps, 'm': self.m,
                'derivative': self.derivative.to_dict(), 'multiplicity': self.multiplicity.to_dict()}


def _truncation_radii(V: MultiplicityVariety, levels: int) -> List[float]:
    full = V.max_modulus
    if full == 0:
        return [0.0]
    return [full / 2.0 ** j for j in reversed(range(levels))]


def _fit_over_truncations(V: MultiplicityVariety, sampler, theta: YoungSpec, m_grid: Sequence[float],
                          name: str, levels: int, constant_name: str = "A") -> CriterionReport:
    history: List[Optional[float]] = []
    bound, samples = None, []
    for radius in _truncation_radii(V, levels):
        truncated = V.within(radius * (1.0 + 1e-12))
        if not len(truncated):
            continue
        samples = sampler(truncated)
        bound = fit_growth_bound(samples, theta, m_grid) if samples else None
        history.append(bound.A if bound else None)

    stable = growth_is_stable(history, GROWTH_RTOL)
    if samples and bound is None:
        stable = False
    report = CriterionReport(criterion=name, bound=bound, samples=samples, history=history,
                             verdict=Verdict.PASS if stable else Verdict.INCONCLUSIVE,
                             constant_name=constant_name)
    logger.info(f"{name}: m={report.fitted_m}, {constant_name}={report.fitted_constant}, "
                f"verdict {report.verdict.value}")
    return report


def _combine(*reports: CriterionReport) -> Verdict:
    return Verdict.PASS if all(r.verdict == Verdict.PASS for r in reports) else Verdict.INCONCLUSIVE


def geometric_test(V: MultiplicityVariety, theta: YoungSpec, m_grid: Sequence[float],
                   levels: int = DOUBLING_LEVELS) -> GeometricReport:
    """Fit N(0, R) <= A + theta(m R) and N(alpha_k, |alpha_k|) <= A + theta(m |alpha_k|).

    Raises:
        EmptyVariety: V has no points.
    """
    if not len(V):
        raise EmptyVariety("geometric test needs a nonempty variety")

    def origin_samples(W: MultiplicityVariety) -> List[Tuple[float, float]]:
        return [(R, big_N(W, 0.0, R)) for R in sample_radii(W)]

    def self_samples(W: MultiplicityVariety) -> List[Tuple[float, float]]:
        return [(abs(a), big_N(W, a, abs(a))) for a, _ in W.points if abs(a) > 0]

    n0 = _fit_over_truncations(V, origin_samples, theta, m_grid, "N(0,R)", levels)
    nzz = _fit_over_truncations(V, self_samples, theta, m_grid, "N(z,|z|)", levels)
    return GeometricReport(N0=n0, Nzz=nzz, verdict=_combine(n0, nzz))


def multiplicity_check(V: MultiplicityVariety, theta: YoungSpec, m_grid: Sequence[float],
                       levels: int = DOUBLING_LEVELS) -> CriterionReport:
    """Diagnostic fit of ln m_k <= ln A + theta(m |alpha_k|)."""
    def samples(W: MultiplicityVariety) -> List[Tuple[float, float]]:
        return [(abs(a), math.log(m)) for a, m in W.points]

    return _fit_over_truncations(V, samples, theta, m_grid, "multiplicity", levels)


def analytic_test(phi: EntireFunctionSpec, V: MultiplicityVariety, theta: YoungSpec,
                  m_grid: Sequence[float], levels: int = DOUBLING_LEVELS) -> AnalyticReport:
    """Fit -ln(|Phi^(m_k)(alpha_k)|/m_k!) <= -ln eps + theta(m |alpha_k|).

    Raises:
        EmptyVariety: V has no points.
        DerivativeVanishes: |Phi^(m_k)(alpha_k)| < 1e-14 at some point.
    """
    if not len(V):
        raise EmptyVariety("analytic test needs a nonempty variety")

    log_sizes = {}
    for alpha, m in V.points:
        value = abs(phi.eval(alpha, m))
        if value < DERIVATIVE_FLOOR:
            raise DerivativeVanishes(f"|Phi^({m})({alpha})| = {value:.3g} contradicts multiplicity {m}")
        log_sizes[alpha] = -(math.log(value) - math.lgamma(m + 1))

    def samples(W: MultiplicityVariety) -> List[Tuple[float, float]]:
        return [(abs(a), log_sizes[a]) for a, _ in W.points]

    derivative = _fit_over_truncations(V, samples, theta, m_grid, "derivative lower bound", levels,
                                       constant_name="eps")
    multiplicity = multiplicity_check(V, theta, m_grid, levels)
    return AnalyticReport(derivative=derivative, multiplicity=multiplicity, verdict=derivative.verdict)
