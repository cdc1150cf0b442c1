"""
Catalog of entire functions with exact derivatives and Taylor coefficients.

Every kind except the segment average is an exponential polynomial
sum_j p_j(xi) exp(lambda_j xi); those share one code path.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import binom, gammaln

from ..errors import OrderTooLarge

logger = logging.getLogger(__name__)

MAX_ORDER = 64

ExpPolyTerm = Tuple[np.ndarray, complex]


class FunctionKind(str, Enum):
    """Catalog kinds."""

    EXPSUM = "expsum"
    POLYEXPSUM = "polyexpsum"
    POLYNOMIAL = "polynomial"
    SEGMENT_AVERAGE = "segment_average"


def exp_taylor(lam: complex, n_max: int) -> np.ndarray:
    """Taylor coefficients lam^n / n! of exp(lam z), n = 0..n_max."""
    if n_max < 0:
        return np.zeros(0, dtype=complex)
    ratios = np.full(n_max + 1, complex(lam), dtype=complex)
    ratios[0] = 1.0
    ratios[1:] /= np.arange(1, n_max + 1)
    return np.cumprod(ratios)


def powers(z: complex, n: int) -> np.ndarray:
    """[1, z, ..., z^(n-1)]."""
    if n <= 0:
        return np.zeros(0, dtype=complex)
    steps = np.full(n, complex(z), dtype=complex)
    steps[0] = 1.0
    return np.cumprod(steps)


def shift_poly(coeffs: Sequence[complex], z: complex) -> np.ndarray:
    """Coefficients in w of p(w + z), ascending."""
    p = np.asarray(coeffs, dtype=complex)
    zp = powers(z, len(p))
    out = np.zeros_like(p)
    for s in range(len(p)):
        i = np.arange(s, len(p))
        out[s] = np.sum(p[s:] * binom(i, s) * zp[:len(p) - s])
    return out


def exp_poly_taylor(terms: Iterable[ExpPolyTerm], n_max: int) -> np.ndarray:
    """Taylor coefficients at 0 of sum p(z) exp(lam z) up to n_max."""
    out = np.zeros(n_max + 1, dtype=complex)
    for poly, lam in terms:
        series = np.convolve(np.asarray(poly, dtype=complex), exp_taylor(lam, n_max))
        out += series[:n_max + 1]
    return out


def exp_poly_eval(terms: Iterable[ExpPolyTerm], xi: complex, order: int = 0) -> complex:
    """order-th derivative of sum p(z) exp(lam z) at xi (Leibniz rule)."""
    total = 0j
    for poly, lam in terms:
        poly = np.asarray(poly, dtype=complex)
        acc = 0j
        for i in range(min(order, len(poly) - 1) + 1):
            deriv = P.polyval(xi, P.polyder(poly, i)) if i else P.polyval(xi, poly)
            acc += binom(order, i) * deriv * complex(lam) ** (order - i)
        total += acc * cmath.exp(lam * xi)
    return complex(total)


def exp_poly_shift(terms: Iterable[ExpPolyTerm], z: complex) -> List[ExpPolyTerm]:
    """Terms of w -> f(w + z) for an exponential polynomial f."""
    shifted = []
    for poly, lam in terms:
        shifted.append((cmath.exp(lam * z) * shift_poly(poly, z), complex(lam)))
    return shifted


@dataclass(frozen=True)
class EntireFunctionSpec:
    """A catalog entire function.

    ``terms`` holds (w, lambda) pairs for EXPSUM and (coefficients, lambda)
    pairs for POLYEXPSUM; ``coeffs`` holds ascending POLYNOMIAL coefficients;
    ``t`` is the SEGMENT_AVERAGE length.
    """

    kind: FunctionKind
    terms: Tuple = ()
    coeffs: Tuple[complex, ...] = ()
    t: float = 1.0
    label: str = ""

    def __post_init__(self):
        errors = []
        if self.kind == FunctionKind.EXPSUM:
            if not any(w != 0 for w, _ in self.terms):
                errors.append("exponential sum needs a term with nonzero weight")
        elif self.kind == FunctionKind.POLYEXPSUM:
            if not any(any(c != 0 for c in poly) for poly, _ in self.terms):
                errors.append("polynomial-exponential sum needs a nonzero polynomial")
        elif self.kind == FunctionKind.POLYNOMIAL:
            if not self.coeffs or self.coeffs[-1] == 0:
                errors.append("polynomial needs a nonzero leading coefficient")
        elif self.kind == FunctionKind.SEGMENT_AVERAGE:
            if not self.t > 0:
                errors.append(f"segment length must be positive, got {self.t}")
        if errors:
            raise ValueError(f"Entire function validation failed: {'; '.join(errors)}")

    @classmethod
    def exp_sum(cls, terms: Iterable[Tuple[complex, complex]], label: str = "") -> 'EntireFunctionSpec':
        return cls(kind=FunctionKind.EXPSUM,
                   terms=tuple((complex(w), complex(lam)) for w, lam in terms), label=label)

    @classmethod
    def poly_exp_sum(cls, terms: Iterable[Tuple[Sequence[complex], complex]],
                     label: str = "") -> 'EntireFunctionSpec':
        return cls(kind=FunctionKind.POLYEXPSUM,
                   terms=tuple((tuple(complex(c) for c in poly), complex(lam)) for poly, lam in terms),
                   label=label)

    @classmethod
    def polynomial(cls, coeffs: Sequence[complex], label: str = "") -> 'EntireFunctionSpec':
        return cls(kind=FunctionKind.POLYNOMIAL, coeffs=tuple(complex(c) for c in coeffs), label=label)

    @classmethod
    def segment_average(cls, t: float, label: str = "") -> 'EntireFunctionSpec':
        return cls(kind=FunctionKind.SEGMENT_AVERAGE, t=float(t), label=label)

    @property
    def is_exp_poly(self) -> bool:
        return self.kind != FunctionKind.SEGMENT_AVERAGE

    def exp_poly_terms(self) -> List[ExpPolyTerm]:
        """The function as a list of (polynomial coefficients, lambda)."""
        if self.kind == FunctionKind.EXPSUM:
            return [(np.array([w], dtype=complex), lam) for w, lam in self.terms]
        if self.kind == FunctionKind.POLYEXPSUM:
            return [(np.array(poly, dtype=complex), lam) for poly, lam in self.terms]
        if self.kind == FunctionKind.POLYNOMIAL:
            return [(np.array(self.coeffs, dtype=complex), 0j)]
        raise ValueError("segment average is not an exponential polynomial")

    def eval(self, xi: complex, order: int = 0) -> complex:
        """order-th derivative at xi.

        Raises:
            OrderTooLarge: order above 64.
        """
        if order < 0:
            raise ValueError(f"derivative order must be nonnegative, got {order}")
        if order > MAX_ORDER:
            raise OrderTooLarge(f"derivative order {order} exceeds {MAX_ORDER}")
        if self.kind == FunctionKind.SEGMENT_AVERAGE:
            return _segment_average_eval(self.t, complex(xi), order)
        return exp_poly_eval(self.exp_poly_terms(), complex(xi), order)

    def __call__(self, xi: complex) -> complex:
        return self.eval(xi, 0)

    def eval_many(self, xis: np.ndarray, order: int = 0) -> np.ndarray:
        """Vectorized eval over an array of points."""
        xis = np.asarray(xis, dtype=complex)
        if order > MAX_ORDER:
            raise OrderTooLarge(f"derivative order {order} exceeds {MAX_ORDER}")
        if not self.is_exp_poly:
            return np.array([self.eval(x, order) for x in xis.ravel()], dtype=complex).reshape(xis.shape)
        total = np.zeros(xis.shape, dtype=complex)
        for poly, lam in self.exp_poly_terms():
            acc = np.zeros(xis.shape, dtype=complex)
            for i in range(min(order, len(poly) - 1) + 1):
                acc += binom(order, i) * P.polyval(xis, P.polyder(poly, i)) * complex(lam) ** (order - i)
            total += acc * np.exp(lam * xis)
        return total

    def derivatives(self, xi: complex, count: int) -> np.ndarray:
        """Taylor coefficients at xi, that is f^(i)(xi)/i! for i < count."""
        if count <= 0:
            return np.zeros(0, dtype=complex)
        if self.is_exp_poly:
            return exp_poly_taylor(exp_poly_shift(self.exp_poly_terms(), xi), count - 1)
        return np.array([self.eval(xi, i) / math.factorial(i) for i in range(count)], dtype=complex)

    def taylor(self, n_max: int) -> np.ndarray:
        """Taylor coefficients at 0 up to index n_max."""
        if self.kind == FunctionKind.SEGMENT_AVERAGE:
            return _segment_average_taylor(self.t, n_max)
        return exp_poly_taylor(self.exp_poly_terms(), n_max)

    def multiply(self, other: 'EntireFunctionSpec') -> Optional['EntireFunctionSpec']:
        """Product of two exponential polynomials, None for other kinds."""
        if not (self.is_exp_poly and other.is_exp_poly):
            return None
        if self.kind == FunctionKind.POLYNOMIAL and other.kind == FunctionKind.POLYNOMIAL:
            return EntireFunctionSpec.polynomial(np.convolve(self.coeffs, other.coeffs))
        terms = []
        for p, lam in self.exp_poly_terms():
            for q, mu in other.exp_poly_terms():
                terms.append((np.convolve(p, q), lam + mu))
        return EntireFunctionSpec.poly_exp_sum(terms)

    def describe(self) -> str:
        if self.label:
            return self.label
        if self.kind == FunctionKind.SEGMENT_AVERAGE:
            return f"segment_average(t={self.t:g})"
        if self.kind == FunctionKind.POLYNOMIAL:
            return f"polynomial(degree {len(self.coeffs) - 1})"
        return f"{self.kind.value}({len(self.terms)} terms)"


def _segment_average_taylor(t: float, n_max: int) -> np.ndarray:
    out = np.zeros(n_max + 1, dtype=complex)
    n = np.arange(0, n_max + 1, 2)
    out[::2] = np.exp(n * math.log(t / 2.0) - gammaln(n + 2))
    return out


def _segment_average_eval(t: float, xi: complex, order: int) -> complex:
    """(e^{a xi} - e^{-a xi})/(t xi) with a = t/2, and its derivatives."""
    a = t / 2.0
    if abs(a * xi) <= 1.0 + order:
        return _segment_average_series(a, xi, order)

    def h(j: int) -> complex:
        return (a ** j * cmath.exp(a * xi) - (-a) ** j * cmath.exp(-a * xi)) / t

    total = 0j
    for i in range(order + 1):
        inv = (-1) ** i * math.factorial(i) / xi ** (i + 1)
        total += binom(order, i) * h(order - i) * inv
    return complex(total)


def _segment_average_series(a: float, xi: complex, order: int) -> complex:
    # sum over even n >= order of a^n xi^(n-order) / ((n+1) (n-order)!)
    n = order if order % 2 == 0 else order + 1
    m = n - order
    power_a = a ** n
    chunk = xi ** m / math.factorial(m)
    total = 0j
    for _ in range(400):
        term = power_a * chunk / (n + 1)
        total += term
        if abs(term) <= 1e-17 * abs(total) and n > order + 4:
            break
        chunk *= xi * xi / ((m + 1) * (m + 2))
        power_a *= a * a
        n += 2
        m += 2
    return complex(total)
