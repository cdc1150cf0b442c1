"""Catalog entire functions, Taylor streams and zero location."""

from .catalog import (MAX_ORDER, EntireFunctionSpec, FunctionKind, exp_poly_eval,
                      exp_poly_shift, exp_poly_taylor, exp_taylor, powers, shift_poly)
from .streams import (ExpPolyStream, SeriesStream, SeriesSum, TaylorStream,
                      complex_fsum, log_domain_terms, resum_shift, sum_power_series,
                      tail_estimate, taylor_stream_of)
from .zeros import (MAX_MULTIPLICITY, ContourSearch, MultiplicityVariety, find_zeros,
                    order_key, polynomial_zeros, principal_arg, taylor_defect, winding_number)

__all__ = [
    'MAX_ORDER', 'EntireFunctionSpec', 'FunctionKind', 'exp_poly_eval', 'exp_poly_shift',
    'exp_poly_taylor', 'exp_taylor', 'powers', 'shift_poly',
    'ExpPolyStream', 'SeriesStream', 'SeriesSum', 'TaylorStream', 'complex_fsum',
    'log_domain_terms', 'resum_shift', 'sum_power_series', 'tail_estimate', 'taylor_stream_of',
    'MAX_MULTIPLICITY', 'ContourSearch', 'MultiplicityVariety', 'find_zeros', 'order_key',
    'polynomial_zeros', 'principal_arg', 'taylor_defect', 'winding_number',
]
