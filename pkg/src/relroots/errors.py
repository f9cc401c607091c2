"""Exception hierarchy shared by every module."""

from __future__ import annotations


class RelRootsError(Exception):
    """Base class for all package errors."""


class DomainError(RelRootsError, ValueError):
    """An argument violates an operation's precondition."""


class GraphFormatError(DomainError):
    """Malformed graph6 / sparse6 / edge-list input.

    ``offset`` is the byte offset in the input where decoding failed.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class IntegrityError(RelRootsError):
    """An internal consistency check failed (indicates a bug, not bad input)."""


class ConvergenceError(RelRootsError):
    """The root solver hit its iteration cap.

    ``partial`` carries the last iterate so callers can inspect it.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
