"""Exception types shared across the package."""

from __future__ import annotations


class CiteTreeError(Exception):
    """Base class for all citetree errors."""


class CycleError(CiteTreeError):
    """An advisor edge would make an author their own ancestor."""


class DuplicateIdError(CiteTreeError):
    """An id is already taken by another record."""


class DanglingReferenceError(CiteTreeError):
    """A record references an author or article that does not exist."""


class InvariantError(CiteTreeError):
    """A computed quantity violates a structural invariant."""


class DimensionMismatchError(CiteTreeError):
    """A citation matrix does not match the author count of a snapshot."""


class UnknownAuthorError(CiteTreeError):
    """An author id is not present in the snapshot."""


class FormatError(CiteTreeError):
    """A snapshot file is corrupt or has an unsupported version."""


class ParseError(CiteTreeError):
    """An input file could not be parsed.

    Carries the file path and 1-based line number so the CLI can point
    at the offending record.
    """

    def __init__(self, path: str, line: int, reason: str) -> None:
        super().__init__(f"{path}:{line}: {reason}")
        self.path = path
        self.line = line
        self.reason = reason


class MissingFieldError(ParseError):
    """A record is missing a required field."""


class AmbiguousAuthorError(CiteTreeError):
    """Author entries cannot be merged or a name reference cannot be
    resolved to a single author."""
