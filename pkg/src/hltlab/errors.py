"""Typed exceptions raised across the package."""


class HLTError(Exception):
    """Base class for all package errors."""


class DomainError(HLTError, ValueError):
    """An argument lies outside the region where a formula is defined."""


class PoleError(DomainError):
    """An argument hits a pole of a special function."""


class QuadratureError(HLTError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class OptimizerError(HLTError):
    """A one-dimensional search could not locate a feasible minimum."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class ConvergenceError(HLTError):
    """An iterative solver did not converge."""


class IdentityViolation(HLTError, AssertionError):
    """A numerically checked identity failed; carries the residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PartitionError(DomainError):
    """A localization partition does not satisfy sum of squares = 1."""


class MonotonicityError(DomainError):
    """A profile expected to be radially decreasing is not."""


class GridError(DomainError):
    """Grid parameters are invalid."""
