"""Exception types shared across the package."""


class MgclError(Exception):
    """Base class for all package errors."""


class ParseError(MgclError):
    """Malformed expression text."""


class ArityError(MgclError):
    """Wrong number of components (e.g. a graph with no height fields)."""


class DomainError(MgclError):
    """Evaluation point or construction parameter outside the valid domain."""


class EvaluationError(MgclError):
    """Jet evaluation produced a non-finite value."""


class PreconditionError(MgclError):
    """An operation contract was violated by the caller."""


class ConditioningError(MgclError):
    """Near-dependent normal basis; carries the offending Gram determinant."""

    def __init__(self, message, gram_det=None):
        super().__init__(message)
        self.gram_det = gram_det


class GeometryError(MgclError):
    """Degenerate metric (non-positive W^2, vanishing area element)."""


class NumericalConsistencyError(MgclError):
    """A quantity violated an identity beyond the allowed clamp window."""


class AliasingError(MgclError):
    """Too few boundary samples for the requested number of Fourier modes."""


class ConvergenceError(MgclError):
    """Iterative solve failed to reach tolerance; carries the best residual."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class ConfigError(MgclError):
    """Invalid or unknown configuration content; names the offending key."""
