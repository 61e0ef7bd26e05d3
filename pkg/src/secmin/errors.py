"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument violates an operation's stated precondition."""


class VerificationError(RuntimeError):
    """A checked identity or theorem failed; this signals an implementation bug."""


class ResourceLimitError(RuntimeError):
    """A construction or enumeration exceeded its memory or step budget."""
