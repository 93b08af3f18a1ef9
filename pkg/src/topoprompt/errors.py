"""Exception types shared across the package.

Plain file-system problems surface as the builtin ``FileNotFoundError`` /
``OSError``; everything listed here is a domain error with a stable type
the CLI can map to an exit code.
"""


class TopopromptError(Exception):
    """Base class for all domain errors raised by this package."""


class UnsupportedFormatError(TopopromptError):
    """Input file is not a supported image (bad magic, zero dimensions, odd mode)."""


class DecodeError(TopopromptError):
    """Input file looked like a supported image but could not be decoded."""


class EmptyImageError(TopopromptError, ValueError):
    """An image with zero width or height was supplied."""


class BudgetExceedsPixelsError(TopopromptError, ValueError):
    """More unique random points requested than pixels available."""


class SchemaError(TopopromptError):
    """A JSON document does not conform to the expected schema."""


class DimensionMismatchError(TopopromptError, ValueError):
    """Two inputs that must share pixel dimensions do not."""


class PlacementFailureError(TopopromptError):
    """Rejection sampling could not place all objects; configuration too dense."""
