"""Exceptions shared across the package."""


class ValidationError(ValueError):
    """Input data violates a structural or semantic invariant."""


class SizeLimitError(RuntimeError):
    """An enumeration would exceed the configured size guard."""
