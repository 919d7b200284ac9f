"""Bounded local repair of a labelling towards a shape requirement."""

from __future__ import annotations

import time

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import BudgetExceeded, RepairFailed
from ..graph import Graph
from ..labelling import (
    EdgeLabelling,
    Requirement,
    _verdict,
    conflicts,
    is_m_proper,
    is_s_proper,
    product_keys,
)
from ..oracle import _MODES, Outcome, bfs_edge_order, run_search

DEFAULT_REPAIR_NODES = 2_000_000
DEFAULT_REPAIR_SECONDS = 20.0


def _cyclomatic(n: int, ce: np.ndarray) -> int:
    if not len(ce):
        return 0
    touched = np.unique(ce)
    adj = coo_matrix((np.ones(len(ce)), (ce[:, 0], ce[:, 1])), shape=(n, n))
    _, comp = connected_components(adj, directed=False)
    return len(ce) - len(touched) + len(np.unique(comp[touched]))


def violation(g: Graph, lab: EdgeLabelling, req: Requirement) -> tuple[int, int]:
    """``(0, 0)`` iff ``req`` holds; otherwise a score that shrinks towards conformity."""
    if req is Requirement.M_PROPER:
        return (0 if is_m_proper(g, lab) else 1, 0)
    if req is Requirement.S_PROPER:
        return (0 if is_s_proper(g, lab) else 1, 0)
    rep = conflicts(g, lab)
    total = len(rep.conflicts)
    if _verdict(req, rep):
        return (0, 0)
    ce = np.asarray(rep.conflicts, dtype=np.int64).reshape(-1, 2)
    if req is Requirement.ALL_INDEPENDENT:
        return (total, total)
    if req is Requirement.ALL_FORESTS:
        return (_cyclomatic(g.n, ce), total)
    if req is Requirement.ONE_EDGE:
        return (total - 1, total)
    cdeg = np.bincount(ce.ravel(), minlength=g.n)
    if req is Requirement.ONE_STAR:
        return (total - int(cdeg.max()), total)
    # S1_MATCHING: conflict edges outside S_1 plus excess degree inside S_1
    is_unit = ~product_keys(g, lab).any(axis=1)
    in_unit = is_unit[ce[:, 0]]
    outside = int((~in_unit).sum())
    du = np.bincount(ce[in_unit].ravel(), minlength=g.n)
    excess = int(np.maximum(du - 1, 0).sum())
    return (outside + excess, total)


def _region(g: Graph, lab: EdgeLabelling, radius: int) -> np.ndarray:
    """Rows of edges with an endpoint within ``radius - 1`` of a conflicting vertex."""
    rep = conflicts(g, lab)
    frontier = {v for e in rep.conflicts for v in e}
    if not frontier:
        # multiset / sum failures: start from every vertex
        return np.arange(g.m)
    seen = set(frontier)
    for _ in range(max(radius - 1, 0)):
        nxt = {w for v in frontier for w in g.neighbors(v)} - seen
        seen |= nxt
        frontier = nxt
    inside = np.zeros(g.n, dtype=bool)
    inside[list(seen)] = True
    return np.nonzero(inside[g.edges[:, 0]] | inside[g.edges[:, 1]])[0]


def repair_conflicts(g: Graph, lab: EdgeLabelling, requirement, max_nodes: int = DEFAULT_REPAIR_NODES,
                     max_seconds: float = DEFAULT_REPAIR_SECONDS, radius: int = 2) -> EdgeLabelling:
    """Return ``lab`` if it meets ``requirement``; otherwise search nearby relabellings.

    First a greedy pass re-toggles single edges near the conflicts, then a
    backtracking search re-labels that neighbourhood (and, failing that, the
    whole graph) with everything else pinned. Raises :class:`RepairFailed`
    carrying the residual report when the budget runs out.
    """
    req = Requirement.parse(requirement)
    score = violation(g, lab, req)
    if score[0] == 0:
        return lab
    t0 = time.monotonic()
    spent = 0

    def fail(msg, cur):
        raise RepairFailed(msg, labelling=cur, report=conflicts(g, cur))

    if max_nodes <= 0:
        fail("repair budget is zero", lab)
    labels = lab.labels.copy()
    cur = lab
    improved = True
    while improved and score[0] > 0:
        improved = False
        for i in _region(g, cur, radius).tolist():
            old = labels[i]
            for new in range(1, lab.k + 1):
                if new == old:
                    continue
                labels[i] = new
                cand = EdgeLabelling(g, labels, lab.k)
                s = violation(g, cand, req)
                spent += 1
                if s < score:
                    score, cur, old = s, cand, new
                    improved = True
                    break
                labels[i] = old
            if score[0] == 0:
                return cur
            if spent >= max_nodes or time.monotonic() - t0 > max_seconds:
                fail("repair budget exhausted in local search", cur)
    if req not in _MODES:
        fail(f"local search stalled and {req.value} has no exact search mode", cur)
    for rows in (_region(g, cur, radius), np.arange(g.m)):
        fixed = cur.labels.copy()
        fixed[rows] = 0
        # pinned edges first so infeasible surroundings are detected early
        base = bfs_edge_order(g)
        order = np.concatenate([base[fixed[base] > 0], base[fixed[base] == 0]])
        left_nodes = max_nodes - spent
        left_secs = max_seconds - (time.monotonic() - t0)
        if left_nodes <= 0 or left_secs <= 0:
            break
        try:
            res = run_search(g, lab.k, req, fixed=fixed, order=order, max_nodes=left_nodes, max_seconds=left_secs)
        except BudgetExceeded:
            break
        spent += res.nodes
        if res.outcome is Outcome.WITNESS:
            return res.labelling
    fail("repair budget exhausted", cur)
