"""Exception hierarchy shared by every module."""

from __future__ import annotations


class RelaxrevError(Exception):
    """Base class for all library errors."""


class SignatureError(RelaxrevError):
    """A sentence or model mentions symbols outside the system signature."""


class ParseError(RelaxrevError):
    """Syntax error with a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class UnsupportedLogic(RelaxrevError):
    """Operation not available for this logic (e.g. no theory-from-models)."""


class FragmentError(RelaxrevError):
    """Concept uses constructors outside the required DL fragment."""


class ShapeError(RelaxrevError):
    """Input does not have the syntactic shape an operator requires."""


class EnumerationLimitError(RelaxrevError):
    """The bounded model space exceeds the configured ceiling."""


class NotClosedError(RelaxrevError):
    """A model set that must be closed under intersection is not."""


class NondeterministicOperator(RelaxrevError):
    """Two calls of a revision operator on the same input disagreed."""


class RevisionFailed(RelaxrevError):
    """No relaxation vector within the caps restores consistency."""

    def __init__(self, message: str, frontier: tuple[int, ...] = ()):
        super().__init__(message)
        self.frontier = tuple(frontier)
