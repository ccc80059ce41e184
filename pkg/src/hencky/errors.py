"""Exception hierarchy shared by every module.

The CLI maps ``HenckyError`` subclasses to exit code 3 (numeric/input error).
"""


class HenckyError(Exception):
    """Base class for library errors."""


class InvalidInputError(HenckyError, ValueError):
    """Non-finite, malformed or out-of-domain input."""


class NotPositiveDefiniteError(InvalidInputError):
    """A tensor that must be positive-definite is not."""


class OrientationError(InvalidInputError):
    """A deformation gradient with det F <= 0 where det F > 0 is required."""


class UnsupportedDimensionError(InvalidInputError):
    """Operation is only defined for a specific dimension."""


class MonotonicityViolationError(HenckyError, ValueError):
    """Refusing to invert a map that is not strictly monotone for these parameters."""


class ParseError(HenckyError, ValueError):
    """Malformed data file row. ``line`` is 1-based."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnitError(HenckyError, ValueError):
    """Unknown or undeclared unit."""
