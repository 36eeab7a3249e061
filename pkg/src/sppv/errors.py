"""Exception hierarchy shared across the package.

Every user-facing failure raises a subclass of SppvError so the CLI can
turn it into a one-line diagnostic and a nonzero exit code.
"""


class SppvError(Exception):
    """Base class for all errors raised by this package."""


class FieldError(SppvError):
    """Invalid field data: bad grid, non-finite values, malformed file."""


class ManifestError(SppvError):
    """Malformed dataset manifest, wind series, or event list."""


class ScoreError(SppvError):
    """Scoring failed: empty date window, missing data for an event."""


class RenderError(SppvError):
    """Plot input does not satisfy a renderer's preconditions."""
