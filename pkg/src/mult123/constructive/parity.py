"""Parity switching: toggle two labels inside a connected subgraph to fix b-degree parities."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import DisconnectedGraphError, LabellingError
from ..graph import Graph
from ..labelling import EdgeLabelling
from .trace import ConstructionTrace
from ._state import LabelState


@dataclass(frozen=True)
class ParityTarget:
    """Connected subgraph ``H`` (edge pairs), toggled labels ``(a, b)`` and wanted ``d_b`` parities.

    ``targets`` maps a vertex of ``H`` to 0 (even) or 1 (odd); vertices without
    an entry are unconstrained. ``free`` is exempt and absorbs the leftover parity.
    """

    edges: tuple[tuple[int, int], ...]
    toggles: tuple[int, int] = (1, 2)
    targets: Mapping[int, int] = field(default_factory=dict)
    free: int | None = None


def _tree(adj: dict[int, list[tuple[int, int]]], root: int):
    parent_edge = {root: -1}
    parent = {root: -1}
    order = [root]
    q = deque([root])
    while q:
        x = q.popleft()
        for y, i in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                parent_edge[y] = i
                order.append(y)
                q.append(y)
    return order, parent, parent_edge


def switch_on_state(state: LabelState, edge_ids: Iterable[int], toggles: tuple[int, int],
                    targets: Mapping[int, int], free: int | None, stage: str,
                    case: str | None = None) -> list[int]:
    """In-place parity switch; returns the vertices whose target is still unmet.

    Uses a BFS spanning tree of ``H`` rooted at ``free`` (or the smallest
    vertex) and resolves vertices leaf to root, toggling the parent edge of
    every vertex whose ``d_b`` parity, counted over the whole graph, is off.
    """
    a, b = toggles
    g = state.g
    ids = sorted(set(int(i) for i in edge_ids))
    if not ids:
        return [v for v, p in targets.items() if v != free and state.d(v, b) % 2 != p]
    adj: dict[int, list[tuple[int, int]]] = {}
    for i in ids:
        lab = int(state.labels[i])
        if lab not in (a, b):
            u, v = g.edges[i]
            raise LabellingError(f"edge {u}-{v} has label {lab}, outside the toggled pair {toggles}")
        u, v = (int(x) for x in g.edges[i])
        adj.setdefault(u, []).append((v, i))
        adj.setdefault(v, []).append((u, i))
    root = free if free is not None and free in adj else min(adj)
    order, parent, parent_edge = _tree(adj, root)
    if len(order) != len(adj):
        unreached = sorted(set(adj) - set(order))
        raise DisconnectedGraphError("parity switch needs a connected subgraph", unreached)
    for x in reversed(order[1:]):
        want = targets.get(x)
        if want is None or state.d(x, b) % 2 == want:
            continue
        i = parent_edge[x]
        state.set_index(i, a if state.labels[i] == b else b, stage, case)
    return [v for v, p in targets.items() if v != free and state.d(v, b) % 2 != p]


def parity_switch(g: Graph, lab: EdgeLabelling, target: ParityTarget) -> EdgeLabelling:
    """Return a relabelling meeting every non-free parity target of ``target``.

    Only edges of ``H`` change, and only between the two toggled labels.
    """
    a, b = target.toggles
    if a == b:
        raise LabellingError("toggled labels must differ")
    ids = []
    for u, v in target.edges:
        try:
            ids.append(g.edge_index(u, v))
        except KeyError:
            raise LabellingError(f"{u}-{v} is not an edge of the graph") from None
    verts = {int(x) for e in target.edges for x in e}
    stray = [v for v in target.targets if v not in verts]
    if stray:
        raise LabellingError(f"target vertices {stray} are not in the subgraph")
    state = LabelState(g, ConstructionTrace("parity-switch", lab.k), lab.k, lab.labels)
    left = switch_on_state(state, ids, (a, b), target.targets, target.free, "parity")
    if left:
        # only possible without a free vertex: the total parity is forced
        raise LabellingError(f"parity targets unreachable at {left}; supply a free vertex")
    return state.result()
