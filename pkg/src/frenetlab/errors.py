"""Exception types shared across the library."""

from __future__ import annotations


class FrenetLabError(Exception):
    """Base class for all library errors."""


class EvaluationError(FrenetLabError):
    """A user-supplied function produced a non-finite or invalid value."""


class DomainError(FrenetLabError):
    """An argument lies outside the valid range of an operation."""


class DegenerateError(FrenetLabError):
    """A quantity required by a formula underflowed (flat segment, zero denominator)."""

    def __init__(self, message: str, node: int | None = None):
        super().__init__(message if node is None else f"{message} (node {node})")
        self.node = node


class DegenerateFrameError(DegenerateError):
    """Curvature at or below the frame threshold: normal and binormal are undefined."""


class DegenerateSpeedError(DegenerateError):
    """Zero speed: the curve is not regular at the requested parameter."""


class ExpressionError(FrenetLabError):
    """Parse or evaluation failure in a curve expression, with source position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
