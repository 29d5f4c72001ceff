"""Exception hierarchy shared across the package."""


class SymbreakError(Exception):
    """Base class for all package errors."""


class GraphError(SymbreakError):
    """Invalid graph input: loops, duplicate edges, bad vertex ids, disconnected."""


class ColouringError(SymbreakError):
    """Colouring does not match its graph (wrong kind, missing values)."""


class SizeBoundError(SymbreakError):
    """An exact search was asked to exceed its configured size bound."""


class ConstructionError(SymbreakError):
    """A colouring construction was invoked outside its preconditions."""


class CertificationError(ConstructionError):
    """A construction produced output that failed its own certificate."""


class BudgetExceededError(SymbreakError):
    """A wall-clock budget ran out inside a search."""
