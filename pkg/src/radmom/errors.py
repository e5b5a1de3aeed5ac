"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """An argument is outside the range an operation accepts."""


class DomainError(ValueError):
    """A point lies too close to a coordinate singularity (the poles)."""


class AccuracyError(ArithmeticError):
    """A quadrature rule is too coarse for the requested result."""


class UnsupportedStateError(ValueError):
    """The requested hydrogen state or sector is not implemented."""
