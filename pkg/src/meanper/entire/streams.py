"""
Taylor coefficient streams for the functions that functionals act on.

A stream hands out Taylor coefficients at the origin on demand. Exponential
polynomials get an exact stream (exact shift and evaluation); anything else
is a generic series stream recentred by binomial resummation.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from ..errors import Divergent
from ..growth import YoungSpec
from .catalog import (EntireFunctionSpec, ExpPolyTerm, exp_poly_eval,
                      exp_poly_shift, exp_poly_taylor)

logger = logging.getLogger(__name__)

DEFAULT_N_MAX = 128
MAX_N_MAX = 1024
SERIES_RTOL = 1e-10


@dataclass
class SeriesSum:
    """A truncated series value with its tail estimate."""

    value: complex
    tail: float
    n_used: int
    flagged: bool = False


def log_domain_terms(factors: Sequence[np.ndarray], log_scale: np.ndarray) -> np.ndarray:
    """Elementwise prod(factors) * exp(log_scale) without intermediate overflow."""
    log_scale = np.asarray(log_scale, dtype=float)
    mask = np.ones(log_scale.shape, dtype=bool)
    logmag = log_scale.copy()
    phase = np.ones(log_scale.shape, dtype=complex)
    for factor in factors:
        factor = np.asarray(factor, dtype=complex)
        mag = np.abs(factor)
        mask &= (mag > 0) & np.isfinite(mag)
        safe = np.where(mask, mag, 1.0)
        logmag += np.log(safe)
        phase *= np.where(mask, factor / safe, 1.0)
    out = np.zeros(log_scale.shape, dtype=complex)
    with np.errstate(over='ignore'):
        out[mask] = np.exp(logmag[mask]) * phase[mask]
    return out


def complex_fsum(values: Sequence[complex]) -> complex:
    """Correctly rounded sum of complex values."""
    values = np.asarray(values, dtype=complex)
    return complex(math.fsum(values.real), math.fsum(values.imag))


def tail_estimate(terms: np.ndarray) -> Tuple[float, float]:
    """Geometric tail bound from the last five nonzero terms.

    Returns:
        (tail, ratio). A series whose nonzero terms stop well before the
        truncation is treated as terminated and gets a zero tail.
    """
    mags = np.abs(terms)
    idx = np.nonzero(mags)[0]
    if len(idx) < 2 or idx[-1] < len(terms) - 9:
        return 0.0, 0.0
    last = idx[-5:]
    first, final = last[0], last[-1]
    if not np.isfinite(mags[final]):
        return math.inf, math.inf
    ratio = float((mags[final] / mags[first]) ** (1.0 / (final - first)))
    if not ratio < 1.0:
        return math.inf, ratio
    return float(mags[final] * ratio / (1.0 - ratio)), ratio


def sum_power_series(coefficients: Callable[[int], np.ndarray], z: complex,
                     rtol: float = SERIES_RTOL) -> SeriesSum:
    """Sum f_n z^n with adaptive truncation and tail control.

    Raises:
        Divergent: the last-five-term ratio exceeds 1 at the largest truncation.
    """
    z = complex(z)
    n_max = DEFAULT_N_MAX
    while True:
        c = coefficients(n_max)
        if z == 0:
            return SeriesSum(complex(c[0]), 0.0, n_max)
        k = np.arange(n_max + 1)
        terms = log_domain_terms([c, np.exp(1j * k * np.angle(z))], k * math.log(abs(z)))
        value = complex_fsum(terms)
        tail, ratio = tail_estimate(terms)
        if tail <= rtol * (1.0 + abs(value)):
            return SeriesSum(value, tail, n_max)
        if n_max >= MAX_N_MAX:
            if ratio > 1.0:
                raise Divergent(f"power series at z={z} has term ratio {ratio:.3g} > 1")
            logger.warning(f"Series at z={z} not converged at n={n_max} (tail {tail:.3g})")
            return SeriesSum(value, tail, n_max, flagged=True)
        n_max *= 2


class TaylorStream:
    """On-demand Taylor coefficients of an entire function at the origin.

    ``growth`` is optional (theta, p) metadata describing the growth class the
    function is expected to belong to.
    """

    is_exp_poly = False

    def __init__(self, growth: Optional[Tuple[YoungSpec, float]] = None, label: str = ""):
        self.growth = growth
        self.label = label

    def coefficients(self, n_max: int) -> np.ndarray:
        raise NotImplementedError

    def coeff(self, n: int) -> complex:
        return complex(self.coefficients(n)[n])

    def evaluate_with_tail(self, z: complex) -> SeriesSum:
        return sum_power_series(self.coefficients, z)

    def evaluate(self, z: complex) -> complex:
        return self.evaluate_with_tail(z).value

    def __call__(self, z: complex) -> complex:
        return self.evaluate(z)

    def shift(self, z: complex) -> 'TaylorStream':
        raise NotImplementedError

    def derivatives(self, z: complex, count: int) -> np.ndarray:
        """Taylor coefficients at z (f^(i)(z)/i!) for i < count."""
        return self.shift(z).coefficients(count - 1)[:count]


class ExpPolyStream(TaylorStream):
    """Exact stream of sum_j p_j(z) exp(lambda_j z)."""

    is_exp_poly = True

    def __init__(self, terms: Iterable[ExpPolyTerm] = (), growth: Optional[Tuple[YoungSpec, float]] = None,
                 label: str = ""):
        super().__init__(growth, label)
        self.terms: List[ExpPolyTerm] = [(np.asarray(p, dtype=complex), complex(lam)) for p, lam in terms]

    @classmethod
    def monomial(cls, l: int, xi: complex) -> 'ExpPolyStream':
        """z^l exp(xi z)."""
        poly = np.zeros(l + 1, dtype=complex)
        poly[l] = 1.0
        return cls([(poly, xi)], label=f"z^{l} exp({xi} z)")

    @classmethod
    def zero(cls) -> 'ExpPolyStream':
        return cls([], label="zero")

    def coefficients(self, n_max: int) -> np.ndarray:
        return exp_poly_taylor(self.terms, n_max)

    def evaluate_with_tail(self, z: complex) -> SeriesSum:
        return SeriesSum(exp_poly_eval(self.terms, z, 0), 0.0, 0)

    def evaluate_derivative(self, z: complex, order: int) -> complex:
        return exp_poly_eval(self.terms, z, order)

    def shift(self, z: complex) -> 'ExpPolyStream':
        return ExpPolyStream(exp_poly_shift(self.terms, z), self.growth, self.label)

    def derivatives(self, z: complex, count: int) -> np.ndarray:
        return exp_poly_taylor(exp_poly_shift(self.terms, z), count - 1)

    def scaled(self, factor: complex) -> 'ExpPolyStream':
        return ExpPolyStream([(factor * p, lam) for p, lam in self.terms], self.growth, self.label)

    def __add__(self, other: 'ExpPolyStream') -> 'ExpPolyStream':
        return ExpPolyStream(self.terms + other.terms, self.growth or other.growth, self.label)


class SeriesStream(TaylorStream):
    """Generic stream from a coefficient generator.

    Args:
        generator: Maps n_max to the coefficients 0..n_max; must be deterministic.
        evaluator: Optional exact point evaluation.
        derivative_fn: Optional exact (z, count) -> Taylor coefficients at z.
    """

    def __init__(self, generator: Callable[[int], np.ndarray],
                 evaluator: Optional[Callable[[complex], complex]] = None,
                 derivative_fn: Optional[Callable[[complex, int], np.ndarray]] = None,
                 growth: Optional[Tuple[YoungSpec, float]] = None, label: str = ""):
        super().__init__(growth, label)
        self._generator = generator
        self._evaluator = evaluator
        self._derivative_fn = derivative_fn
        self._cache = np.zeros(0, dtype=complex)

    def coefficients(self, n_max: int) -> np.ndarray:
        if len(self._cache) <= n_max:
            self._cache = np.asarray(self._generator(n_max), dtype=complex)
        return self._cache[:n_max + 1].copy()

    def evaluate_with_tail(self, z: complex) -> SeriesSum:
        if self._evaluator is not None:
            return SeriesSum(complex(self._evaluator(z)), 0.0, 0)
        return super().evaluate_with_tail(z)

    def derivatives(self, z: complex, count: int) -> np.ndarray:
        if self._derivative_fn is not None:
            return np.asarray(self._derivative_fn(z, count), dtype=complex)
        return super().derivatives(z, count)

    def shift(self, z: complex) -> 'SeriesStream':
        z = complex(z)
        if z == 0:
            return self

        def generator(n_max: int) -> np.ndarray:
            return resum_shift(self.coefficients(2 * n_max + 32), z, n_max)

        def evaluator(w: complex) -> complex:
            return self.evaluate(w + z)

        derivative_fn = None
        if self._derivative_fn is not None:
            def derivative_fn(w: complex, count: int) -> np.ndarray:
                return self._derivative_fn(w + z, count)

        return SeriesStream(generator, evaluator, derivative_fn, self.growth, self.label)


def resum_shift(coeffs: np.ndarray, z: complex, n_max: int) -> np.ndarray:
    """Taylor coefficients of f(w + z) from those of f, by binomial resummation."""
    coeffs = np.asarray(coeffs, dtype=complex)
    top = len(coeffs) - 1
    out = np.zeros(n_max + 1, dtype=complex)
    log_z = math.log(abs(z))
    arg_z = np.angle(z)
    for n in range(min(n_max, top) + 1):
        s = np.arange(n, top + 1)
        log_binom = gammaln(s + 1) - gammaln(n + 1) - gammaln(s - n + 1)
        terms = log_domain_terms([coeffs[n:], np.exp(1j * (s - n) * arg_z)], log_binom + (s - n) * log_z)
        out[n] = complex_fsum(terms)
    return out


def taylor_stream_of(spec: EntireFunctionSpec, growth: Optional[Tuple[YoungSpec, float]] = None) -> TaylorStream:
    """Stream for a catalog function, exact when it is an exponential polynomial."""
    if spec.is_exp_poly:
        return ExpPolyStream(spec.exp_poly_terms(), growth, spec.describe())
    return SeriesStream(spec.taylor, evaluator=spec.__call__, derivative_fn=spec.derivatives,
                        growth=growth, label=spec.describe())
