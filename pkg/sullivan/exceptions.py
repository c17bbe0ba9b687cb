"""
Exception types raised by the sullivan package.

Every exception carries an ``exit_code`` so the command line interface can map
failures to distinct process exit statuses.
"""

from typing import Any, Optional


class SullivanError(Exception):
    """Base class for all errors raised by the library."""

    exit_code = 1


class PermutationError(SullivanError, ValueError):
    """Invalid permutation data or an operation outside its domain."""

    exit_code = 4


class DiagramValidationError(SullivanError, ValueError):
    """A diagram violates one of the defining conditions.

    Attributes:
        condition: Short code of the violated condition ("i" ... "v", "flavor",
            "type" or "syntax").
    """

    exit_code = 4

    def __init__(self, condition: str, message: str):
        super().__init__(f"condition ({condition}): {message}")
        self.condition = condition


class DegreeError(SullivanError, ValueError):
    """An operation was applied to a cell of unsuitable degree or shape."""

    exit_code = 4


class UnsupportedDiagramError(SullivanError, ValueError):
    """The diagram or chain is outside what an operation supports."""

    exit_code = 4


class BudgetExceededError(SullivanError):
    """Configured cell or complexity budget would be exceeded."""

    exit_code = 3


class ChainComplexError(SullivanError):
    """A chain complex invariant is broken.

    Attributes:
        witness: The offending cell, face or matrix entry, when known.
    """

    exit_code = 5

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class MatchingError(SullivanError):
    """A Morse matching is not valid or not acyclic."""

    exit_code = 5

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class CacheError(SullivanError):
    """A cached complex is corrupt, stale or of the wrong format version."""

    exit_code = 6


class VerificationError(SullivanError):
    """A verification suite or class certification failed."""

    exit_code = 5

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report
