"""
Representations of Fourier-Borel transforms L(S)(xi) = <S, exp(xi .)>.

Each representation provides point values, Taylor coefficients at the
origin, and Taylor coefficients at any point (``derivatives``), which is all
the pairing needs.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..entire.catalog import EntireFunctionSpec, FunctionKind
from ..entire.streams import resum_shift, sum_power_series
from ..entire.zeros import MultiplicityVariety
from ..newton.jets import binomial_jet, jet_mul, unit_jet

logger = logging.getLogger(__name__)


class Transform:
    """Base class of Fourier-Borel transform representations."""

    is_exp_poly = False

    def taylor(self, n_max: int) -> np.ndarray:
        raise NotImplementedError

    def derivatives(self, xi: complex, count: int) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, xi: complex) -> complex:
        return complex(self.derivatives(xi, 1)[0])

    def describe(self) -> str:
        return type(self).__name__


class CatalogTransform(Transform):
    """A catalog entire function used as a transform."""

    def __init__(self, spec: EntireFunctionSpec):
        self.spec = spec
        self.is_exp_poly = spec.is_exp_poly

    @property
    def is_segment_average(self) -> bool:
        return self.spec.kind == FunctionKind.SEGMENT_AVERAGE

    def taylor(self, n_max: int) -> np.ndarray:
        return self.spec.taylor(n_max)

    def derivatives(self, xi: complex, count: int) -> np.ndarray:
        return self.spec.derivatives(xi, count)

    def __call__(self, xi: complex) -> complex:
        return self.spec.eval(xi, 0)

    def describe(self) -> str:
        return self.spec.describe()


class FactoredPolynomial(Transform):
    """prod (xi - root)^power, kept in factored form."""

    is_exp_poly = True

    def __init__(self, factors: Sequence[Tuple[complex, int]]):
        self.factors: List[Tuple[complex, int]] = [(complex(r), int(p)) for r, p in factors if p > 0]

    @property
    def degree(self) -> int:
        return sum(p for _, p in self.factors)

    @property
    def coefficients(self) -> np.ndarray:
        """Ascending monomial coefficients."""
        coeffs = np.array([1.0], dtype=complex)
        for root, power in self.factors:
            for _ in range(power):
                coeffs = np.convolve(coeffs, [-root, 1.0])
        return coeffs

    def as_spec(self) -> EntireFunctionSpec:
        return EntireFunctionSpec.polynomial(self.coefficients)

    def taylor(self, n_max: int) -> np.ndarray:
        out = np.zeros(n_max + 1, dtype=complex)
        coeffs = self.coefficients
        top = min(len(coeffs), n_max + 1)
        out[:top] = coeffs[:top]
        return out

    def derivatives(self, xi: complex, count: int) -> np.ndarray:
        order = count - 1
        jet = unit_jet(order)
        for root, power in self.factors:
            jet = jet_mul(jet, binomial_jet(complex(xi) - root, power, order), order)
        return jet

    def describe(self) -> str:
        return f"factored polynomial of degree {self.degree}"


class SyntheticSeries(Transform):
    """Explicit Taylor coefficients g_0..g_N with a declared tail bound."""

    def __init__(self, coeffs: Sequence[complex], tail_bound: float = 0.0):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.tail_bound = float(tail_bound)

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    def taylor(self, n_max: int) -> np.ndarray:
        out = np.zeros(n_max + 1, dtype=complex)
        top = min(len(self.coeffs), n_max + 1)
        out[:top] = self.coeffs[:top]
        return out

    def derivatives(self, xi: complex, count: int) -> np.ndarray:
        if complex(xi) == 0:
            return self.taylor(count - 1)
        return resum_shift(self.coeffs, complex(xi), count - 1)

    def __call__(self, xi: complex) -> complex:
        return sum_power_series(self.taylor, xi).value

    def describe(self) -> str:
        return f"synthetic series (N={self.n_max}, tail {self.tail_bound:.2g})"


class DeflatedSeries(SyntheticSeries):
    """scale * Phi(xi) / (xi - alpha)^power as a synthetic series.

    Point derivatives are taken from the structure instead of the series:
    jets of Phi divided by jets of (xi - alpha)^power, with the vanishing
    order at the other variety points imposed exactly.
    """

    def __init__(self, coeffs: Sequence[complex], tail_bound: float, phi: EntireFunctionSpec,
                 alpha: complex, power: int, scale: complex, variety: MultiplicityVariety):
        super().__init__(coeffs, tail_bound)
        self.phi = phi
        self.alpha = complex(alpha)
        self.power = int(power)
        self.scale = complex(scale)
        self.variety = variety

    def derivatives(self, xi: complex, count: int) -> np.ndarray:
        xi = complex(xi)
        k = self.variety.index_of(xi)
        if k is not None and self.variety[k][0] == self.alpha or xi == self.alpha:
            # Phi/(xi-alpha)^s = sum_{n>=s} phi_n(alpha) (xi-alpha)^(n-s); phi_n(alpha) = 0 for n < m
            m = self.variety[k][1] if k is not None else 0
            jet = self.phi.derivatives(self.alpha, count + self.power)[self.power:]
            jet[:max(0, m - self.power)] = 0.0
            return self.scale * jet
        phi_jet = self.phi.derivatives(xi, count)
        divisor = binomial_jet(xi - self.alpha, self.power, count - 1)
        out = np.zeros(count, dtype=complex)
        for n in range(count):
            out[n] = (phi_jet[n] - np.dot(divisor[n:0:-1], out[:n])) / divisor[0]
        if k is not None:
            out[:self.variety[k][1]] = 0.0
        return self.scale * out

    def describe(self) -> str:
        return f"Phi/(xi - {self.alpha:.6g})^{self.power} series (N={self.n_max})"


def product_transform(a: Transform, b: Transform, n_max: int = 1024) -> Transform:
    """Transform of the convolution product: L(S * U) = L(S) L(U)."""
    if isinstance(a, FactoredPolynomial) and isinstance(b, FactoredPolynomial):
        return FactoredPolynomial(a.factors + b.factors)
    spec_a = a.as_spec() if isinstance(a, FactoredPolynomial) else getattr(a, 'spec', None)
    spec_b = b.as_spec() if isinstance(b, FactoredPolynomial) else getattr(b, 'spec', None)
    if spec_a is not None and spec_b is not None:
        product = spec_a.multiply(spec_b)
        if product is not None:
            return CatalogTransform(product)
    coeffs = np.convolve(a.taylor(n_max), b.taylor(n_max))[:n_max + 1]
    tail = getattr(a, 'tail_bound', 0.0) + getattr(b, 'tail_bound', 0.0)
    logger.debug(f"Product transform falls back to a Taylor series of length {n_max + 1}")
    return SyntheticSeries(coeffs, tail)


def deflate_series(coeffs: np.ndarray, alpha: complex, rtol: float = 1e-8) -> Tuple[np.ndarray, float, float]:
    """Divide a power series by (xi - alpha), assuming it vanishes at alpha.

    Each quotient coefficient is taken from whichever of the two equivalent
    recurrences (from the top, or from the constant term) accumulates the
    smaller absolute sum.

    Returns:
        (quotient, remainder, remainder scale).
    """
    p = np.asarray(coeffs, dtype=complex)
    n = len(p) - 1
    alpha = complex(alpha)
    top = np.zeros(n, dtype=complex)
    top_abs = np.zeros(n)
    acc, acc_abs = 0j, 0.0
    for j in range(n, 0, -1):
        acc = p[j] + alpha * acc
        acc_abs = abs(p[j]) + abs(alpha) * acc_abs
        top[j - 1] = acc
        top_abs[j - 1] = acc_abs
    remainder = p[0] + alpha * acc
    scale = abs(p[0]) + abs(alpha) * acc_abs
    if alpha == 0:
        return top, abs(remainder), scale

    bottom = np.zeros(n, dtype=complex)
    bottom_abs = np.full(n, math.inf)
    with np.errstate(over='ignore', invalid='ignore'):
        h, h_abs = 0j, 0.0
        for j in range(n):
            h = (h - p[j]) / alpha
            h_abs = (h_abs + abs(p[j])) / abs(alpha)
            bottom[j] = h
            bottom_abs[j] = h_abs
        use_bottom = np.isfinite(bottom_abs) & (bottom_abs < top_abs)
    quotient = np.where(use_bottom, bottom, top)
    return quotient, abs(remainder), scale
