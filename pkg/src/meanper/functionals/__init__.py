"""Analytic functionals, the duality pairing and the coefficient functionals."""

from .coefficients import s_functional, t_functional
from .functional import (AnalyticFunctional, PairingResult, convolve, dirac, pair,
                         product_functional, verify_monomial_identity)
from .transforms import (CatalogTransform, DeflatedSeries, FactoredPolynomial,
                         SyntheticSeries, Transform, deflate_series, product_transform)

__all__ = [
    'AnalyticFunctional', 'PairingResult', 'pair', 'convolve', 'dirac',
    'product_functional', 'verify_monomial_identity', 's_functional', 't_functional',
    'Transform', 'CatalogTransform', 'FactoredPolynomial', 'SyntheticSeries',
    'DeflatedSeries', 'deflate_series', 'product_transform',
]
