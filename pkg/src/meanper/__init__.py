"""
meanper - series expansions of mean-periodic functions in exponential monomials.
"""

__version__ = "0.1.0"

from .cli import main
from .config import ExperimentConfig, load_config
from .entire import EntireFunctionSpec, MultiplicityVariety, find_zeros, taylor_stream_of
from .expansion import (c_to_d, extract_general, extract_interpolating, synthesize_general,
                        synthesize_interpolating)
from .functionals import AnalyticFunctional, convolve, pair, s_functional, t_functional
from .growth import YoungSpec
from .pipeline import ExperimentPipeline

__all__ = [
    'main', '__version__', 'ExperimentConfig', 'load_config', 'ExperimentPipeline',
    'EntireFunctionSpec', 'MultiplicityVariety', 'find_zeros', 'taylor_stream_of', 'YoungSpec',
    'AnalyticFunctional', 'pair', 'convolve', 's_functional', 't_functional',
    'extract_general', 'extract_interpolating', 'c_to_d', 'synthesize_general',
    'synthesize_interpolating',
]
