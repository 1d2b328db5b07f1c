"""Exception types raised across the package."""

from __future__ import annotations


class RicciGluingError(Exception):
    """Base class for every error raised by ricci_gluing."""


class InvalidInputError(RicciGluingError, ValueError):
    """Raised when user-supplied input cannot be processed (CLI exit code 2)."""


class SelfLoopError(InvalidInputError):
    """Raised when an edge list contains a (v, v) pair."""


class DuplicateEdgeError(InvalidInputError):
    """Raised when the same undirected edge appears twice."""


class DisconnectedGraphError(InvalidInputError):
    """Raised when some pair of vertices has no connecting path."""


class VertexOutOfRangeError(InvalidInputError):
    """Raised when a vertex id is negative or not below the vertex count."""


class EdgeListParseError(InvalidInputError):
    """Raised when an edge-list line cannot be parsed."""

    def __init__(self, message: str, line_number: int | None = None) -> None:
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class NotAnEdgeError(InvalidInputError):
    """Raised when an operation defined on edges receives a non-adjacent pair."""


class SameVertexError(InvalidInputError):
    """Raised when curvature is requested for a pair (x, x)."""


class MeasureNotNormalizedError(InvalidInputError):
    """Raised when measure masses are non-positive or do not sum to one."""


class SupportOutOfRangeError(InvalidInputError):
    """Raised when a measure is supported outside the graph's vertex set."""


class OracleTooLargeError(InvalidInputError):
    """Raised when the brute-force LP oracle is asked for a support above its limit."""


class InvalidSpecError(InvalidInputError):
    """Raised when (n, m) does not describe a valid gluing graph."""


class ClassEmptyForSpecError(InvalidInputError):
    """Raised when an edge class has no representative for the given (n, m)."""


class NTooSmallError(InvalidInputError):
    """Raised when the positivity results are requested for n < 5."""


class GraphTooLargeForExhaustiveError(InvalidInputError):
    """Raised when exhaustive subset enumeration would exceed the vertex limit."""


class GraphTooSmallError(InvalidInputError):
    """Raised when a spectral quantity needs more vertices than the graph has."""


class NotLipschitzError(RicciGluingError):
    """Raised when a potential violates |f(u) - f(v)| <= d(u, v)."""

    def __init__(self, u: int, v: int, difference: int, distance: int) -> None:
        super().__init__(
            f"potential is not 1-Lipschitz on ({u}, {v}): |f(u) - f(v)| = {difference} > d = {distance}"
        )
        self.pair = (u, v)
        self.difference = difference
        self.distance = distance


class InfeasiblePlanError(RicciGluingError):
    """Raised when a coupling violates non-negativity or a marginal constraint."""
