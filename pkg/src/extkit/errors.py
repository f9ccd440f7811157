"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class ExtkitError(Exception):
    """Base class for all errors raised by extkit."""


class ParseError(ExtkitError, ValueError):
    """Malformed input file. ``line`` is 1-based, or None when not tied to a line."""

    kind = "malformed"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedLineError(ParseError):
    kind = "malformed"


class IndexRangeError(ParseError):
    kind = "index-range"


class SelfLoopError(ParseError):
    kind = "self-loop"


class DuplicateEdgeError(ParseError):
    kind = "duplicate-edge"


class CountMismatchError(ParseError):
    kind = "count-mismatch"


class CandidateError(ExtkitError, ValueError):
    """Candidate of the wrong type or with out-of-range elements."""


class PreconditionError(ExtkitError, ValueError):
    """An operation was called outside its documented precondition."""


class SizeLimitError(ExtkitError):
    """Instance too large for an exhaustive routine."""


class UnsupportedDirectionError(ExtkitError):
    """Algorithm does not apply to the problem's order direction."""


class DecompositionError(ExtkitError, ValueError):
    """Tree decomposition is invalid or does not match the graph."""


class InvalidInstanceError(ExtkitError, ValueError):
    """Source instance violates the constraints of its problem class."""
