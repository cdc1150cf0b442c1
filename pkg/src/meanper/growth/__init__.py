"""Young functions, Legendre transforms and growth norms."""

from .norms import (GrowthBound, conjugate_norm, fit_growth_bound,
                    growth_is_stable, log_weights, theta_norm)
from .young import (YoungKind, YoungSpec, conjugate, eval_theta, halving_holds,
                    legendre, theta_values)

__all__ = [
    'YoungKind', 'YoungSpec', 'eval_theta', 'theta_values', 'legendre',
    'conjugate', 'halving_holds', 'GrowthBound', 'theta_norm',
    'conjugate_norm', 'fit_growth_bound', 'growth_is_stable', 'log_weights',
]
