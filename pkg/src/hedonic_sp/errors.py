"""Exception hierarchy shared by every module."""


class HedonicError(Exception):
    """Base class for library errors."""


class ValidationError(HedonicError, ValueError):
    """Input violates a precondition (bad index, bad parameter, bad entry)."""


class ClassMismatchError(ValidationError):
    """A profile's valuation class is not accepted by the requested operation."""


class InstanceFormatError(ValidationError):
    """Malformed instance text. ``lineno`` is 1-based, or None for whole-file problems."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class GuardExceededError(HedonicError):
    """Instance too large for an exhaustive routine."""
