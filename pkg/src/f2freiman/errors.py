"""Error types shared across the package."""

__all__ = [
    "F2Error",
    "DimensionMismatchError",
    "EmptySetError",
    "InstanceTooLargeError",
    "InvariantViolationError",
    "SetFileError",
]


class F2Error(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(F2Error):
    """Operands live in different spaces or a value is out of range."""


class EmptySetError(F2Error):
    """Operation requires a nonempty set."""


class InstanceTooLargeError(F2Error):
    """A dense-domain computation would exceed the configured dense limit."""


class InvariantViolationError(F2Error):
    """A certified guarantee failed.

    This is a defect signal: the inequalities asserted by the increment and
    covering machinery are theorems, so a violation means the implementation
    (not the input) is wrong.  Callers must not catch-and-continue.
    """


class SetFileError(F2Error):
    """Malformed point-set file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
