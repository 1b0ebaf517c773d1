"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceError(RuntimeError):
    """A request exceeds a configured resource ceiling (memory, exponent size)."""
