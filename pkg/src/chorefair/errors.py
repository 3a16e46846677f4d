"""Exception hierarchy shared across the package."""


class ChorefairError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(ChorefairError):
    """Allocation / instance shapes disagree."""


class PreconditionError(ChorefairError):
    """A documented algorithm precondition does not hold for the input."""


class VerificationError(ChorefairError):
    """An output failed its post-construction guarantee check.

    This signals an implementation bug (or a degenerate input outside the
    guarantee's scope), never a legitimate result.
    """


class EnumerationLimitError(ChorefairError):
    """An exhaustive check was refused because the search space is too large.

    Raised instead of silently skipping the check.
    """


class NoSuchSubsetError(ChorefairError):
    """The threshold-subset search precondition fails (pool too cheap)."""
