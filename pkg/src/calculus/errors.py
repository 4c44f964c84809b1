"""Exception hierarchy shared by the calculus, geometry and verify packages."""

from __future__ import annotations


class FormsError(ValueError):
    """Base class for every failure the library raises on purpose."""


class DomainError(FormsError):
    """An expression was evaluated outside its domain.

    Raised for negative square-root arguments, zero denominators and
    degenerate metrics. ``subexpression`` holds a truncated rendering of the
    node that failed.
    """

    def __init__(self, message: str, subexpression: str = "") -> None:
        self.subexpression = subexpression
        if subexpression:
            message = f"{message}: {subexpression}"
        super().__init__(message)


class ArityError(FormsError):
    """A point does not carry enough coordinates for an expression."""


class FormMismatchError(FormsError):
    """Degree, dimension or space tag of two operands disagree."""


class GeometryError(FormsError):
    """A geometry, seed or chart violates a construction invariant."""


class SamplingError(FormsError):
    """Rejection sampling could not find enough points inside the domain."""


class FrameError(FormsError):
    """Gram-Schmidt met a null or wrong-signature vector."""


class CodecError(FormsError):
    """A JSON payload does not describe a valid expression, form or geometry."""
