"""Counting functions and interpolating-variety criteria."""

from .counting import (CountingProfile, big_N, big_N_integral, counting_profile,
                       little_n, sample_radii)
from .criteria import (AnalyticReport, CriterionReport, GeometricReport, Verdict,
                       analytic_test, geometric_test, multiplicity_check)

__all__ = [
    'CountingProfile', 'little_n', 'big_N', 'big_N_integral', 'counting_profile', 'sample_radii',
    'Verdict', 'CriterionReport', 'GeometricReport', 'AnalyticReport',
    'geometric_test', 'analytic_test', 'multiplicity_check',
]
