"""Replayable record of a construction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..graph import Graph
from ..labelling import EdgeLabelling


@dataclass(frozen=True)
class TraceStep:
    """Set every edge in ``edges`` (row indices into ``graph.edges``) to ``label``."""

    edges: tuple[int, ...] | np.ndarray
    label: int
    stage: str
    case: str | None = None


@dataclass(frozen=True)
class Milestone:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ConstructionTrace:
    algorithm: str
    k: int = 3
    steps: list[TraceStep] = field(default_factory=list)
    milestones: list[Milestone] = field(default_factory=list)
    anomalies: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def record(self, edges, label: int, stage: str, case: str | None = None) -> None:
        if isinstance(edges, np.ndarray):
            if len(edges) == 0:
                return
            edges = edges.copy()
        else:
            edges = tuple(int(e) for e in edges)
            if not edges:
                return
        self.steps.append(TraceStep(edges, int(label), stage, case))

    def milestone(self, name: str, ok: bool, detail: str = "") -> bool:
        self.milestones.append(Milestone(name, bool(ok), detail))
        return bool(ok)

    @property
    def failed_milestones(self) -> list[Milestone]:
        return [m for m in self.milestones if not m.ok]

    def extend(self, other: "ConstructionTrace") -> None:
        self.steps.extend(other.steps)
        self.milestones.extend(other.milestones)
        self.anomalies.extend(other.anomalies)

    def stages(self) -> list[str]:
        out: list[str] = []
        for s in self.steps:
            if not out or out[-1] != s.stage:
                out.append(s.stage)
        return out

    def replay(self, g: Graph, k: int | None = None) -> EdgeLabelling:
        """Apply the steps, in order, to the all-1 labelling of ``g``."""
        labels = np.ones(g.m, dtype=np.int64)
        for s in self.steps:
            idx = np.asarray(s.edges, dtype=np.int64)
            labels[idx] = s.label
        return EdgeLabelling(g, labels, self.k if k is None else k)

    def summary(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "steps": len(self.steps),
            "stages": self.stages(),
            "milestones_failed": [m.name for m in self.failed_milestones],
            "anomalies": list(self.anomalies),
        }


@dataclass
class Construction:
    """Output of a constructor: the labelling, its trace and the shape it promises."""

    labelling: object
    trace: ConstructionTrace
    requirement: object = None

    def __iter__(self):
        yield self.labelling
        yield self.trace
