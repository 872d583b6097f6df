from typing import Any


class MgxError(Exception):
    """
    Base class of every error raised by the package
    """


class InputError(MgxError, ValueError):
    """
    Malformed input: bad indices, unreadable files, violated preconditions
    """


class DomainError(MgxError, ValueError):
    """
    Parameters outside the domain where a formula is defined
    """


class UnsupportedShapeError(DomainError):
    """
    Turán shape outside the closed-form machinery
    """


class BudgetExceededError(MgxError, RuntimeError):
    """
    Search refused or aborted because of the node budget.

    ``best`` holds the best result found so far (a lower bound, never the extremal value).
    """

    def __init__(self, message: str, best: Any = None, nodes: int = 0):
        super().__init__(message)
        self.best = best
        self.nodes = nodes


class CertificationError(MgxError, RuntimeError):
    """
    Numerical result whose optimality residual exceeds the tolerance
    """

    def __init__(self, message: str, result: Any = None):
        super().__init__(message)
        self.result = result
