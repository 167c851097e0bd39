"""Exception types shared across the package."""


class KseplabError(Exception):
    """Base class for all package errors."""


class ValidationError(KseplabError, ValueError):
    """An input violates a documented precondition or invariant."""


class ConfigError(ValidationError):
    """A configuration file could not be parsed or validated.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InternalConsistencyError(KseplabError):
    """A numerical self-check failed (e.g. an expectation value came out complex)."""
