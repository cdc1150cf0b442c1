"""
Analytic functionals and the duality pairing <S, f>.

The pairing is the Taylor pairing sum_n n! g_n f_n, where g_n are the Taylor
coefficients of L(S). Shortcuts with the same contract are used when they
apply:

- f an exponential polynomial: <S, z^i exp(lambda z)> = L(S)^(i)(lambda)
- L(S) an exponential polynomial: point masses and their derivatives
- L(S) a segment average: Gauss-Legendre quadrature
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import gammaln

from ..entire.catalog import EntireFunctionSpec
from ..entire.streams import (DEFAULT_N_MAX, MAX_N_MAX, SERIES_RTOL, ExpPolyStream,
                              TaylorStream, complex_fsum, log_domain_terms, tail_estimate)
from ..errors import Divergent
from .transforms import (CatalogTransform, FactoredPolynomial, SyntheticSeries, Transform,
                         product_transform)

logger = logging.getLogger(__name__)

QUADRATURE_NODES = 64


@dataclass
class PairingResult:
    """Value of <S, f> with its tail estimate."""

    value: complex
    tail_estimate: float = 0.0
    n_used: int = 0
    flagged: bool = False
    method: str = "exact"


class AnalyticFunctional:
    """A functional given by its Fourier-Borel transform."""

    def __init__(self, fb: Union[Transform, EntireFunctionSpec], label: str = ""):
        """Initialize the functional.

        Args:
            fb: Transform representation, or a catalog function used as one.
            label: Display name.
        """
        self.fb: Transform = CatalogTransform(fb) if isinstance(fb, EntireFunctionSpec) else fb
        self.label = label or self.fb.describe()
        if isinstance(self.fb, SyntheticSeries) and not np.any(self.fb.coeffs) and self.label != "zero":
            raise ValueError("a functional with an identically zero transform must be labelled \"zero\"")

    @classmethod
    def from_spec(cls, spec: EntireFunctionSpec, label: str = "") -> 'AnalyticFunctional':
        return cls(CatalogTransform(spec), label)

    @property
    def spec(self) -> Optional[EntireFunctionSpec]:
        return getattr(self.fb, 'spec', None)

    def transform(self, xi: complex) -> complex:
        """L(S)(xi)."""
        return self.fb(xi)

    def __repr__(self) -> str:
        return f"AnalyticFunctional({self.label})"


def _taylor_pairing(fb: Transform, f: TaylorStream, n_max: Optional[int],
                    rtol: float) -> PairingResult:
    n = n_max or DEFAULT_N_MAX
    while True:
        g = fb.taylor(n)
        c = f.coefficients(n)
        idx = np.arange(n + 1)
        terms = log_domain_terms([g, c], gammaln(idx + 1))
        value = complex_fsum(terms)
        tail, ratio = tail_estimate(terms)
        if tail <= rtol * (1.0 + abs(value)):
            return PairingResult(value, tail, n, method="taylor")
        if n >= MAX_N_MAX:
            if ratio > 1.0:
                raise Divergent(f"pairing terms grow with ratio {ratio:.3g} at n={n}")
            logger.warning(f"Pairing not converged at n={n}: tail {tail:.3g}")
            return PairingResult(value, tail, n, flagged=True, method="taylor")
        n = min(2 * n, MAX_N_MAX)


def _exp_poly_pairing(fb: Transform, f: ExpPolyStream) -> PairingResult:
    # <S, z^i e^{lambda z}> = L(S)^(i)(lambda) = i! [Taylor coefficient i at lambda]
    total = 0j
    for poly, lam in f.terms:
        jet = fb.derivatives(lam, len(poly))
        factorials = np.cumprod(np.concatenate([[1.0], np.arange(1, len(poly))]))
        total += complex(np.sum(poly * factorials * jet))
    return PairingResult(total, 0.0, 0, method="exponential")


def _point_mass_pairing(spec: EntireFunctionSpec, f: TaylorStream) -> PairingResult:
    total, tail = 0j, 0.0
    for poly, lam in spec.exp_poly_terms():
        if len(poly) == 1:
            result = f.evaluate_with_tail(lam)
            total += poly[0] * result.value
            tail += abs(poly[0]) * result.tail
            continue
        jet = f.derivatives(lam, len(poly))
        factorials = np.cumprod(np.concatenate([[1.0], np.arange(1, len(poly))]))
        total += complex(np.sum(poly * factorials * jet))
    return PairingResult(total, tail, 0, method="point_mass")


def _segment_pairing(t: float, f: TaylorStream) -> PairingResult:
    nodes, weights = leggauss(QUADRATURE_NODES)
    values = np.array([f.evaluate(0.5 * t * x) for x in nodes], dtype=complex)
    return PairingResult(complex(0.5 * np.sum(weights * values)), 0.0, QUADRATURE_NODES, method="quadrature")


def pair(S: AnalyticFunctional, f: TaylorStream, n_max: Optional[int] = None,
         method: str = "auto", rtol: float = SERIES_RTOL) -> PairingResult:
    """Duality pairing <S, f>.

    Args:
        S: Functional.
        f: Taylor stream of the function.
        n_max: Starting truncation of the Taylor pairing (doubled up to 1024).
        method: "auto" for the shortcuts, "taylor" to force the plain Taylor pairing.
        rtol: Relative tail tolerance.

    Raises:
        Divergent: the Taylor pairing terms grow at the largest truncation.
    """
    fb = S.fb
    if method == "taylor":
        if isinstance(fb, FactoredPolynomial) and n_max is not None and n_max < fb.degree:
            raise ValueError(f"n_max={n_max} is below the transform degree {fb.degree}")
        return _taylor_pairing(fb, f, n_max, rtol)
    if method != "auto":
        raise ValueError(f"unknown pairing method {method!r}")

    if isinstance(f, ExpPolyStream):
        return _exp_poly_pairing(fb, f)
    if isinstance(fb, FactoredPolynomial):
        return _point_mass_pairing(fb.as_spec(), f)
    if isinstance(fb, CatalogTransform):
        if fb.is_segment_average:
            return _segment_pairing(fb.spec.t, f)
        return _point_mass_pairing(fb.spec, f)
    return _taylor_pairing(fb, f, n_max, rtol)


def convolve(T: AnalyticFunctional, f: TaylorStream, z: complex, **kwargs) -> complex:
    """(T * f)(z) = <T, tau_z f> with tau_z f(w) = f(w + z)."""
    return pair(T, f.shift(complex(z)), **kwargs).value


def product_functional(S: AnalyticFunctional, U: AnalyticFunctional) -> AnalyticFunctional:
    """The convolution product S * U, with L(S * U) = L(S) L(U)."""
    return AnalyticFunctional(product_transform(S.fb, U.fb), label=f"{S.label} * {U.label}")


def verify_monomial_identity(T: AnalyticFunctional, xi: complex, l: int,
                             phi: Optional[EntireFunctionSpec] = None, method: str = "auto") -> float:
    """|<T, z^l exp(xi z)> - Phi^(l)(xi)| for Phi = L(T)."""
    if l > 10:
        raise ValueError(f"monomial order {l} above 10")
    phi = phi or T.spec
    if phi is None:
        raise ValueError("verify_monomial_identity needs the catalog transform of T")
    paired = pair(T, ExpPolyStream.monomial(l, complex(xi)), method=method).value
    return abs(paired - phi.eval(complex(xi), l))


def dirac(a: complex = 0j) -> AnalyticFunctional:
    """Point evaluation at a, whose transform is exp(a xi)."""
    return AnalyticFunctional.from_spec(EntireFunctionSpec.exp_sum([(1.0, a)]), label=f"delta_{a}")

