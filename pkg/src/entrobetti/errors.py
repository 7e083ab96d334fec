"""Exception types shared across the package."""


class EntroBettiError(Exception):
    """Base class for all package errors."""


class ArgumentError(EntroBettiError, ValueError):
    """Malformed or inconsistent input (shapes, dimensions, ranges)."""


class ResourceError(EntroBettiError, RuntimeError):
    """A computation would exceed the configured size budget."""

    def __init__(self, message, largest_feasible=None):
        super().__init__(message)
        self.largest_feasible = largest_feasible


class VerificationError(EntroBettiError):
    """A structural check failed (e.g. d∘d ≠ 0)."""
