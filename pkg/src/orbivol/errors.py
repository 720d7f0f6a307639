"""Exception hierarchy shared by all orbivol modules."""


class OrbivolError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(OrbivolError):
    """Invalid run configuration (precision below minimum, bad cutoff, ...)."""


class DomainError(OrbivolError, ValueError):
    """Argument outside the natural domain of a function."""

    def __init__(self, function, argument, reason=""):
        self.function = function
        self.argument = argument
        msg = f"{function}: argument {argument} outside domain"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class QuadratureError(OrbivolError):
    """Quadrature failed to reach the requested tolerance within budget."""

    def __init__(self, message, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class ParseError(OrbivolError, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position


class DiagramError(OrbivolError, ValueError):
    """Structurally invalid Coxeter diagram."""


class UnresolvedEdgeError(DiagramError):
    """A dashed edge still has unknown length."""


class NonRealizableError(DiagramError):
    """No hyperbolic realization exists for the requested dashed length."""


class AmbiguityError(DiagramError):
    def __init__(self, message, candidates):
        super().__init__(message)
        self.candidates = candidates


class RefusedError(OrbivolError):
    """Operation refused because its preconditions cannot be guaranteed."""


class InconclusiveCharacterError(OrbivolError):
    """The quadratic character value at a prime could not be decided."""


class DependencyError(OrbivolError):
    """A required input (field data, zeta value) is missing."""


class DegradedPrecisionWarning(UserWarning):
    """Requested accuracy exceeds what the available inputs can certify."""
