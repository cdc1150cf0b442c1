"""Hermite divided differences, Newton polynomials and expansion polynomials."""

from .closed_form import (divided_diff_exponential, expansion_poly,
                          exponential_divided_differences, exponential_values)
from .jets import binomial_jet, inverse_product_jet, jet_mul, polynomial_jet, unit_jet
from .tables import (DividedDifferenceTable, HermiteInterpolant, JetTable, NewtonForm, PiProduct,
                     ValueSet, hermite_interpolant, leja_order, newton_eval, newton_jet, pi_jet,
                     psi_forward, psi_inverse, restrict)

__all__ = [
    'ValueSet', 'DividedDifferenceTable', 'JetTable', 'NewtonForm', 'PiProduct', 'HermiteInterpolant',
    'psi_forward', 'psi_inverse', 'newton_eval', 'newton_jet', 'pi_jet', 'restrict',
    'hermite_interpolant', 'leja_order', 'expansion_poly', 'divided_diff_exponential',
    'exponential_divided_differences', 'exponential_values',
    'binomial_jet', 'inverse_product_jet', 'jet_mul', 'polynomial_jet', 'unit_jet',
]
