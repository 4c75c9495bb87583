"""Exception types shared across the package."""


class EmptyRelationError(ValueError):
    """Raised when a relation would contain no pairs."""


class EdgeListParseError(ValueError):
    """A malformed line in an edge-list file."""

    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        self.line = line
        self.reason = reason
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class BudgetExceededError(RuntimeError):
    """An exact enumeration would exceed its configured work budget."""


class ConfigurationError(ValueError):
    """Statistics or grid configuration does not support the requested mode."""


class UnboundedProgramError(RuntimeError):
    """The entropic program has an improving ray: statistics are missing."""
