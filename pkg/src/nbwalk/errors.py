"""Exception hierarchy shared by all nbwalk modules."""

from __future__ import annotations


class NbwalkError(Exception):
    """Base class for every error raised by this package."""


class GraphError(NbwalkError):
    """Invalid adjacency input or infeasible graph parameters."""

    def __init__(self, message: str, vertex: int | None = None):
        super().__init__(message)
        self.vertex = vertex


class NonRegular(GraphError):
    pass


class Asymmetric(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class InfeasibleDegree(GraphError):
    pass


class GenerationTimeout(GraphError):
    pass


class OverlapTimeout(GenerationTimeout):
    pass


class NumericsError(NbwalkError):
    """Eigensolver or recurrence failure."""


class NoConvergence(NumericsError):
    pass


class DenseLimitExceeded(NumericsError):
    pass


class OverflowRisk(NumericsError):
    pass


class HorizonTooShort(NumericsError):
    pass


class SandwichViolation(NumericsError):
    pass


class Degree2Nb(NbwalkError, ValueError):
    """Non-backtracking walk requested on a 2-regular graph."""
