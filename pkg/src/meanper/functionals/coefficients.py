"""
Coefficient functionals S_{k,l} (general expansion) and T_{k,l}
(interpolating expansion).

L(S_{k,l})(xi) = (xi - alpha_k)^l prod_{n<k} (xi - alpha_n)^{m_n}
L(T_{k,l})(xi) = m_k!/Phi^(m_k)(alpha_k) * Phi(xi)/(xi - alpha_k)^(m_k - l)
"""

import logging
import math

import numpy as np

from ..entire.catalog import EntireFunctionSpec
from ..entire.zeros import MultiplicityVariety
from ..errors import DeflationResidual, DerivativeVanishes
from .functional import AnalyticFunctional
from .transforms import DeflatedSeries, FactoredPolynomial, deflate_series

logger = logging.getLogger(__name__)

DEFAULT_SERIES_LENGTH = 1024
GUARD_COEFFICIENTS = 32
DEFLATION_RTOL = 1e-8


def s_functional(V: MultiplicityVariety, k: int, l: int) -> AnalyticFunctional:
    """S_{k,l}, so that c_{k,l} = <S_{k,l}, f>.

    Raises:
        IndexError: invalid k or l.
    """
    V.check_index(k, l)
    factors = [(alpha, m) for alpha, m in V.points[:k]] + [(V.points[k][0], l)]
    return AnalyticFunctional(FactoredPolynomial(factors), label=f"S[{k},{l}]")


def t_functional(phi: EntireFunctionSpec, V: MultiplicityVariety, k: int, l: int,
                 n_max: int = DEFAULT_SERIES_LENGTH) -> AnalyticFunctional:
    """T_{k,l}, so that d_{k,l} = <T_{k,l}, f>.

    The Taylor series of Phi is deflated m_k - l times by (xi - alpha_k)
    and scaled by m_k!/Phi^(m_k)(alpha_k).

    Raises:
        IndexError: invalid k or l.
        DeflationResidual: a division left a non-negligible remainder.
        DerivativeVanishes: Phi^(m_k)(alpha_k) is zero.
    """
    V.check_index(k, l)
    alpha, m = V.points[k]
    power = m - l
    derivative = phi.eval(alpha, m)
    if derivative == 0:
        raise DerivativeVanishes(f"Phi^({m})({alpha}) vanishes")
    scale = math.factorial(m) / derivative

    coeffs = phi.taylor(n_max + power + GUARD_COEFFICIENTS)
    for step in range(power):
        coeffs, remainder, size = deflate_series(coeffs, alpha)
        if remainder > DEFLATION_RTOL * size:
            raise DeflationResidual(
                f"division {step + 1} of {power} by (xi - {alpha}) left remainder "
                f"{remainder:.3g} (scale {size:.3g})")

    tail_bound = float(abs(scale) * np.sum(np.abs(coeffs[n_max + 1:])))
    series = DeflatedSeries(coeffs[:n_max + 1] * scale, tail_bound, phi, alpha, power, scale, V)
    logger.debug(f"T[{k},{l}] built from {len(coeffs)} deflated coefficients")
    return AnalyticFunctional(series, label=f"T[{k},{l}]")
