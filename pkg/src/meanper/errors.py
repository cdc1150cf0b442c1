"""
Exception hierarchy for meanper.

Every error carries the process exit code the CLI reports for it.
"""

from typing import List, Optional


class MeanPeriodicError(Exception):
    """Base class for all meanper errors."""

    exit_code: int = 1


class ConfigError(MeanPeriodicError, ValueError):
    """Experiment configuration could not be parsed or validated."""

    exit_code = 4

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        self.diagnostics = list(diagnostics or [])
        if self.diagnostics:
            message = f"{message}: {'; '.join(self.diagnostics)}"
        super().__init__(message)


class StructuralError(MeanPeriodicError):
    """The zero variety does not support the requested analysis."""

    exit_code = 2


class NoZeros(StructuralError):
    """The search disk contains no zero of the transform."""


class EmptyVariety(StructuralError):
    """An operation that needs at least one variety point got none."""


class LinearCaseError(MeanPeriodicError, ValueError):
    """The Legendre transform of the linear Young function is infinite."""

    exit_code = 3


class DomainError(MeanPeriodicError, ValueError):
    """Argument outside the evaluation domain of a Young function."""

    exit_code = 3


class NumericalError(MeanPeriodicError, ArithmeticError):
    """Base class for numerical failures and tolerance breaches."""

    exit_code = 3


class OrderTooLarge(NumericalError):
    """Derivative order above the supported cap."""


class ContourThroughZero(NumericalError):
    """A contour kept passing through a zero after all jittered retries."""


class MultiplicityTooHigh(NumericalError):
    """A zero with multiplicity above the supported cap."""


class DerivativeVanishes(NumericalError):
    """Phi^(m_k)(alpha_k) is numerically zero, contradicting the multiplicity."""


class CoincidentNodes(NumericalError):
    """Two interpolation nodes coincide numerically."""


class Divergent(NumericalError):
    """A Taylor series is not converging at the requested truncation."""


class DeflationResidual(NumericalError):
    """Synthetic division left a residual that is not negligible."""


class ToleranceExceeded(NumericalError):
    """A verification residual exceeded its configured tolerance."""


class TruncationWarning(UserWarning):
    """A truncated sum whose last term is not negligible."""

    def __init__(self, message: str, index: Optional[tuple] = None, ratio: float = 0.0):
        super().__init__(message)
        self.index = index
        self.ratio = ratio
