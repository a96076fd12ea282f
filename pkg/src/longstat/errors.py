"""Exception types shared across the package."""


class LongstatError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(LongstatError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateInputError(LongstatError, ValueError):
    """Input data carries no usable signal (for example an all-zero series)."""


class FitFailureError(LongstatError, RuntimeError):
    """A numerical fit did not produce a usable result."""


class DomainError(LongstatError, ValueError):
    """A requested population quantity is undefined for the given model."""
