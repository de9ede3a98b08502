class CsakitError(Exception):
    """Base class for all library errors."""


class MalformedWordError(CsakitError):
    """A letter sequence references a generator outside the ambient rank."""


class UnsupportedBaseError(CsakitError):
    """The requested operation needs a base group class we cannot decide."""


class CapExceededError(CsakitError):
    """An iterative closure computation ran out of its join budget."""

    def __init__(self, cap):
        super().__init__(f"closure did not stabilize within {cap} joins")
        self.cap = cap


class UnsupportedShapeError(CsakitError):
    """Graph-of-groups operation restricted to finite trees and lines."""


class ParseError(CsakitError):
    """Presentation text rejected, with position information."""

    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos
