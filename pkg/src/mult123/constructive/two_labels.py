"""2-labellings with restricted product conflicts: complete, bipartite and subcubic graphs."""

from __future__ import annotations

import heapq

import numpy as np

from .. import _kernels as K
from ..errors import ConstructionError, PreconditionError
from ..graph import Graph, bfs_layers, bipartition, complete_graph
from ..labelling import EdgeLabelling, Requirement, check_shape
from .trace import Construction, ConstructionTrace


def _verify(g: Graph, lab: EdgeLabelling, req: Requirement, trace: ConstructionTrace) -> None:
    rep = check_shape(g, lab, req)
    trace.milestone(f"final:{req.value}", rep.ok, f"worst {rep.report.worst}")
    if not rep.ok:
        raise ConstructionError(f"output violates {req.value}", trace=trace, report=rep.report)


# ---------------------------------------------------------------------------
# complete graphs


def complete_labels(n: int) -> np.ndarray:
    """``c[j]``: the common label of the edges from ``v_j`` to earlier vertices.

    Starting from ``K_2`` with label 1, vertex ``v_j`` takes label 1 when no
    earlier vertex is incident only to 1s, else label 2 (then no earlier vertex
    is incident only to 2s). Only the counts of all-1 / all-2 vertices matter.
    """
    c = np.zeros(n, dtype=np.int64)
    if n < 2:
        return c
    c[1] = 1
    all1, all2 = 2, 0
    for j in range(2, n):
        if all1 == 0:
            c[j] = 1
            all1, all2 = 1, 0
        elif all2 == 0:
            c[j] = 2
            all1, all2 = 0, all2 + 1
        else:
            raise ConstructionError(f"alternation invariant broken at vertex {j}")
    return c


def label_complete(n: int) -> Construction:
    """2-labelling of ``K_n`` in which exactly one class induces one edge and the rest are independent."""
    if n < 2:
        raise PreconditionError("label_complete needs n >= 2")
    g = complete_graph(n)
    trace = ConstructionTrace("complete", 2)
    c = complete_labels(n)
    labels = c[g.edges[:, 1]]
    ok = True
    all1, all2 = 2, 0
    for j in range(2, n):
        all1, all2 = (all1 + 1, 0) if c[j] == 1 else (0, all2 + 1)
        ok &= all1 == 0 or all2 == 0
    trace.milestone("alternation invariant at every step", ok)
    later = g.edges[:, 1]
    for j in np.nonzero(c == 2)[0].tolist():
        trace.record(np.nonzero(later == j)[0], 2, "add-vertex", f"v{j}")
    lab = EdgeLabelling(g, labels, 2)
    _verify(g, lab, Requirement.ONE_EDGE, trace)
    return Construction(lab, trace, Requirement.ONE_EDGE)


# ---------------------------------------------------------------------------
# bipartite graphs


def label_bipartite_two(g: Graph, root: int | None = None) -> Construction:
    """2-labelling of a connected bipartite graph where conflicts only touch ``root``.

    Vertices at odd distance from the root get odd 2-degree, those at even
    positive distance even 2-degree. Layers are handled deepest first; the
    edges of a vertex into the previous layer are all labelled 2, except the
    one to its smallest parent which becomes 1 when the parity needs fixing.
    """
    bipartition(g)
    root = 0 if root is None else int(root)
    layering = bfs_layers(g, root)
    trace = ConstructionTrace("bipartite", 2)
    trace.data["root"] = root
    if g.m == 0:
        lab = EdgeLabelling(g, [], 2)
        return Construction(lab, trace, Requirement.ONE_STAR)
    dist = np.empty(g.n, dtype=np.int64)
    for i, layer in enumerate(layering.layers):
        dist[list(layer)] = i
    du, dv = dist[g.edges[:, 0]], dist[g.edges[:, 1]]
    child = np.where(du > dv, g.edges[:, 0], g.edges[:, 1])
    upper = np.where(du > dv, g.edges[:, 1], g.edges[:, 0])
    cdist = dist[child]
    # per child, edges sorted by parent id; the first is the smallest parent
    order = np.lexsort((upper, child))
    labels = np.full(g.m, 2, dtype=np.int64)
    d2 = np.zeros(g.n, dtype=np.int64)
    for i in range(layering.depth, 0, -1):
        rows = order[cdist[order] == i]
        kids = child[rows]
        first = np.ones(len(rows), dtype=bool)
        first[1:] = kids[1:] != kids[:-1]
        up_count = np.bincount(kids, minlength=g.n)
        vs = kids[first]
        have = d2[vs] + up_count[vs]
        fix = rows[first][(have % 2) != (i % 2)]
        labels[fix] = 1
        twos = rows[labels[rows] == 2]
        np.add.at(d2, child[twos], 1)
        np.add.at(d2, upper[twos], 1)
        trace.record(twos, 2, f"layer {i}")
    lab = EdgeLabelling(g, labels, 2)
    par = dist % 2
    ok = bool(np.all((d2 % 2 == par) | (np.arange(g.n) == root)))
    trace.milestone("layer parities (root exempt)", ok)
    rep = check_shape(g, lab, Requirement.ONE_STAR)
    at_root = all(root in e for e in rep.report.conflicts)
    trace.milestone("every conflict edge touches the root", at_root)
    _verify(g, lab, Requirement.ONE_STAR, trace)
    if not ok or not at_root:
        raise ConstructionError("bipartite invariants violated", trace=trace, report=rep.report)
    return Construction(lab, trace, Requirement.ONE_STAR)


# ---------------------------------------------------------------------------
# subcubic graphs

_CANDIDATES = {
    0: [()],
    1: [(1,)],
    2: [(1, 1), (2, 1), (1, 2)],
    3: [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 1), (2, 1, 2), (1, 2, 2)],
}
_FALLBACK = {0: [], 1: [(2,)], 2: [(2, 2)], 3: [(2, 2, 2)]}


def peel_order(g: Graph) -> tuple[list[int], list[tuple[int, ...]], np.ndarray]:
    """Repeatedly remove a vertex of minimum current degree (smallest id on ties).

    Stops once at most one edge remains. Returns the removed vertices, their
    neighbours at removal time, and a mask of the base edges left over.
    """
    deg = g.degrees.astype(np.int64).copy()
    alive = np.ones(g.n, dtype=bool)
    heap = [(int(deg[v]), v) for v in range(g.n)]
    heapq.heapify(heap)
    edges_left = g.m
    removed, nbrs = [], []
    while edges_left > 1:
        d, v = heapq.heappop(heap)
        if not alive[v] or d != deg[v]:
            continue
        alive[v] = False
        live = tuple(w for w in g.neighbors(v) if alive[w])
        for w in live:
            deg[w] -= 1
            heapq.heappush(heap, (int(deg[w]), w))
        edges_left -= len(live)
        removed.append(v)
        nbrs.append(live)
    base = alive[g.edges[:, 0]] & alive[g.edges[:, 1]]
    return removed, nbrs, base


def label_subcubic_two(g: Graph) -> Construction:
    """2-labelling of a graph with maximum degree at most 3 in which every class induces a forest.

    Vertices are peeled by minimum degree and added back in reverse order.
    Each returning vertex tries the label patterns that the induction
    guarantees (all 1; then one 2; then two 2s) and keeps the first one whose
    changed classes stay acyclic. Needing any other pattern is recorded as an
    anomaly.
    """
    if g.max_degree > 3:
        raise PreconditionError(f"maximum degree {g.max_degree} exceeds 3")
    trace = ConstructionTrace("subcubic", 2)
    removed, nbrs, base = peel_order(g)
    trace.data["peel_order"] = removed
    present = np.ones(g.n, dtype=np.bool_)
    present[removed] = False
    labels = np.zeros(g.m, dtype=np.int64)
    labels[base] = 1
    key = np.zeros(g.n, dtype=np.int64)  # 2-degree among present edges
    indptr, indices = g.csr()
    mark = np.zeros(g.n, dtype=np.int64)
    queue = np.zeros(max(g.n, 1), dtype=np.int64)
    stamp = 0
    for v, ns in zip(reversed(removed), reversed(nbrs)):
        present[v] = True
        rows = [g.edge_index(v, w) for w in ns]
        seeds = np.asarray((v,) + ns, dtype=np.int64)
        chosen = None
        for attempt, pats in enumerate((_CANDIDATES[len(ns)], _FALLBACK[len(ns)])):
            for pat in pats:
                for w, x in zip(ns, pat):
                    if x == 2:
                        key[v] += 1
                        key[w] += 1
                stamp += 1
                if K.classes_acyclic(seeds, indptr, indices, present, key, mark, stamp, queue):
                    chosen = pat
                    break
                for w, x in zip(ns, pat):
                    if x == 2:
                        key[v] -= 1
                        key[w] -= 1
            if chosen is not None:
                if attempt:
                    trace.anomalies.append(f"vertex {v}: pattern {chosen} outside the inductive cases")
                break
        if chosen is None:
            raise ConstructionError(f"no 2-labelling extends to vertex {v}", trace=trace)
        for r, x in zip(rows, chosen):
            labels[r] = x
        trace.record([r for r, x in zip(rows, chosen) if x == 2], 2, "re-add", f"degree {len(ns)}")
    lab = EdgeLabelling(g, labels, 2)
    _verify(g, lab, Requirement.ALL_FORESTS, trace)
    return Construction(lab, trace, Requirement.ALL_FORESTS)
