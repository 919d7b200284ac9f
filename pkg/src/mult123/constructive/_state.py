"""Mutable working labelling shared by the constructions."""

from __future__ import annotations

import numpy as np

from ..graph import Graph
from ..labelling import EdgeLabelling
from .trace import ConstructionTrace


class LabelState:
    """Labels aligned with ``g.edges`` plus incrementally maintained i-degrees."""

    def __init__(self, g: Graph, trace: ConstructionTrace, k: int = 3, labels=None):
        self.g = g
        self.k = k
        self.trace = trace
        self.labels = np.ones(g.m, dtype=np.int64) if labels is None else np.array(labels, dtype=np.int64)
        self.cnt = np.zeros((g.n, k + 1), dtype=np.int64)
        if g.m:
            np.add.at(self.cnt, (g.edges[:, 0], self.labels), 1)
            np.add.at(self.cnt, (g.edges[:, 1], self.labels), 1)

    def eid(self, u: int, v: int) -> int:
        return self.g.edge_index(u, v)

    def label(self, u: int, v: int) -> int:
        return int(self.labels[self.g.edge_index(u, v)])

    def d(self, v: int, lab: int) -> int:
        return int(self.cnt[v, lab])

    def set_index(self, i: int, lab: int, stage: str, case: str | None = None) -> None:
        old = int(self.labels[i])
        if old == lab:
            return
        u, v = self.g.edges[i]
        self.cnt[u, old] -= 1
        self.cnt[v, old] -= 1
        self.cnt[u, lab] += 1
        self.cnt[v, lab] += 1
        self.labels[i] = lab
        self.trace.record((i,), lab, stage, case)

    def set(self, u: int, v: int, lab: int, stage: str, case: str | None = None) -> None:
        self.set_index(self.g.edge_index(u, v), lab, stage, case)

    def set_many(self, idx, lab: int, stage: str, case: str | None = None) -> None:
        idx = np.asarray(idx, dtype=np.int64)
        idx = idx[self.labels[idx] != lab]
        if not len(idx):
            return
        e = self.g.edges[idx]
        old = self.labels[idx]
        np.add.at(self.cnt, (e[:, 0], old), -1)
        np.add.at(self.cnt, (e[:, 1], old), -1)
        self.cnt[:, lab] += np.bincount(e.ravel(), minlength=self.g.n)
        self.labels[idx] = lab
        self.trace.record(idx, lab, stage, case)

    def mono(self, v: int) -> int:
        """1, 2 or 3 for an i-monochromatic vertex, 0 if bichromatic."""
        d2, d3 = self.cnt[v, 2], self.cnt[v, 3]
        if d2 and d3:
            return 0
        if d2:
            return 2
        if d3:
            return 3
        return 1

    def result(self) -> EdgeLabelling:
        return EdgeLabelling(self.g, self.labels.copy(), self.k)
