"""Exception types shared by the library and the command line."""

from __future__ import annotations


class GorkitError(Exception):
    """Base class for all library errors."""


class PreconditionError(GorkitError, ValueError):
    """An operation was called on input outside its domain."""


class EnumerationCapError(GorkitError, RuntimeError):
    """A lattice-point or search enumeration would exceed the configured cap."""


class ParseError(GorkitError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
