"""Coefficient extraction, series synthesis and sequence norms."""

from .coefficients import (ExpansionCoefficients, Flavor, c_to_d, extract_general,
                           extract_interpolating, truncation_for_radius)
from .norms import (NormGrowth, coeff_norm_general, coeff_norm_interpolating,
                    divided_difference_norm, jet_norm, norm_growth)
from .reports import complex_to_json, read_csv, to_jsonable, write_csv, write_json
from .synthesis import (ConvergenceReport, SynthesizedFunction, convergence_report,
                        residual_mean_periodic, synthesize_general, synthesize_interpolating)

__all__ = [
    'ExpansionCoefficients', 'Flavor', 'extract_general', 'extract_interpolating', 'c_to_d',
    'truncation_for_radius', 'coeff_norm_general', 'coeff_norm_interpolating', 'jet_norm',
    'divided_difference_norm', 'norm_growth', 'NormGrowth', 'SynthesizedFunction',
    'synthesize_general', 'synthesize_interpolating', 'residual_mean_periodic',
    'convergence_report', 'ConvergenceReport', 'write_csv', 'write_json', 'read_csv',
    'to_jsonable', 'complex_to_json',
]
