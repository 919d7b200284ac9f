"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class Mult123Error(Exception):
    """Base class for every error raised by this package."""


class GraphError(Mult123Error, ValueError):
    """Invalid graph input or a structural precondition on a graph failed."""


class Graph6Error(GraphError):
    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class EdgeListError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DisconnectedGraphError(GraphError):
    def __init__(self, message: str, unreached=()):
        super().__init__(message)
        self.unreached = tuple(unreached)


class NotBipartiteError(GraphError):
    """Carries an odd cycle as a vertex sequence."""

    def __init__(self, odd_cycle):
        self.odd_cycle = tuple(odd_cycle)
        super().__init__(f"graph is not bipartite; odd cycle {list(self.odd_cycle)}")


class DuplicateEdgeWarning(UserWarning):
    pass


class ColouringError(Mult123Error, ValueError):
    def __init__(self, message: str, edge=None):
        super().__init__(message)
        self.edge = edge


class LabellingError(Mult123Error, ValueError):
    """A labelling does not fit its graph (missing/extra edges, labels out of range)."""


class PreconditionError(Mult123Error, ValueError):
    """Input graph is outside the domain of the requested algorithm."""


class BudgetExceeded(Mult123Error, RuntimeError):
    def __init__(self, message: str, nodes: int = 0, seconds: float = 0.0):
        super().__init__(message)
        self.nodes = nodes
        self.seconds = seconds


class ConstructionError(Mult123Error, RuntimeError):
    """A construction milestone failed; ``trace`` holds the steps taken so far."""

    def __init__(self, message: str, trace=None, report=None):
        super().__init__(message)
        self.trace = trace
        self.report = report


class RepairFailed(Mult123Error, RuntimeError):
    def __init__(self, message: str, labelling=None, report=None):
        super().__init__(message)
        self.labelling = labelling
        self.report = report
