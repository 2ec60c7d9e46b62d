"""Exception hierarchy shared by all airy_trap modules."""


class AiryTrapError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AiryTrapError, ValueError):
    """An input lies outside the supported domain of an operation."""


class AccuracyError(AiryTrapError):
    """A result could not be certified to the required accuracy."""


class ConvergenceError(AiryTrapError):
    """An iterative solver failed to converge."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []


class BranchError(AiryTrapError):
    """A root solver converged onto the wrong (growing) branch."""


class SingularError(AiryTrapError, ZeroDivisionError):
    """Evaluation hit a pole of a matching formula."""


class QuadratureError(AiryTrapError):
    """Adaptive quadrature did not reach the requested tolerance."""


class StabilityError(AiryTrapError):
    """A time evolution violated its norm-growth guard."""


class ConfigError(AiryTrapError, ValueError):
    """A simulation configuration violates one of its invariants."""


class FitError(AiryTrapError):
    """Data in a fit window does not admit the requested fit."""


class EmptyDataError(AiryTrapError, ValueError):
    """A rendering routine received no data."""
