"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class NumericError(ArithmeticError):
    """A numerical procedure could not reach the requested accuracy."""
