"""3-labellings of arbitrary graphs where only S_1 may induce edges, and those form a matching."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..colouring import DEFAULT_MAX_SECONDS, NormalizedColouring, normalize_colouring, optimal_colouring
from ..errors import ConstructionError, RepairFailed
from ..graph import Graph, connected_components, induced_subgraph
from ..labelling import EdgeLabelling, Requirement, check_shape
from ..oracle import P_PROPER, find_k_labelling
from ._state import LabelState
from .four_chromatic import _components, label_four_chromatic
from .parity import switch_on_state
from .repair import repair_conflicts
from .trace import Construction, ConstructionTrace, TraceStep


# ---------------------------------------------------------------------------
# per-component plumbing


def lift_rows(g: Graph, sub: Graph, mapping: list[int]) -> np.ndarray:
    """Row in ``g.edges`` of every row of ``sub.edges``."""
    if not sub.m:
        return np.zeros(0, dtype=np.int64)
    mp = np.asarray(mapping, dtype=np.int64)
    return np.fromiter((g.edge_index(int(u), int(v)) for u, v in mp[sub.edges]), dtype=np.int64, count=sub.m)


def lift_trace(into: ConstructionTrace, part: ConstructionTrace, rows: np.ndarray, tag: str) -> None:
    for s in part.steps:
        edges = rows[np.asarray(s.edges, dtype=np.int64)]
        into.steps.append(TraceStep(edges, s.label, s.stage, s.case))
    for m in part.milestones:
        into.milestone(f"{tag}:{m.name}", m.ok, m.detail)
    into.anomalies.extend(f"{tag}: {a}" for a in part.anomalies)


def per_component(g: Graph, trace: ConstructionTrace, k: int,
                  solve: Callable[[Graph, ConstructionTrace], EdgeLabelling]) -> np.ndarray:
    """Run ``solve`` on every component (relabelled to ``0..n_c-1``) and merge the labels."""
    labels = np.ones(g.m, dtype=np.int64)
    for comp in connected_components(g):
        if len(comp) == g.n:
            sub, mapping = g, list(range(g.n))
        else:
            sub, mapping = induced_subgraph(g, comp)
        if sub.m == 0:
            continue
        local = ConstructionTrace(trace.algorithm, k)
        lab = solve(sub, local)
        rows = lift_rows(g, sub, mapping)
        labels[rows] = lab.labels
        lift_trace(trace, local, rows, f"component {comp[0]}")
    return labels


def oracle_p_proper(sub: Graph, trace: ConstructionTrace, max_seconds=None) -> EdgeLabelling:
    kw = {} if max_seconds is None else {"max_seconds": max_seconds}
    res = find_k_labelling(sub, 3, P_PROPER, **kw)
    if not res.found:
        trace.milestone("oracle:p-proper 3-labelling exists", False, res.outcome.value)
        raise ConstructionError("no p-proper 3-labelling found", trace=trace)
    lab = res.labelling
    for x in (2, 3):
        trace.record(np.nonzero(lab.labels == x)[0], x, "oracle", "p-proper search")
    return lab


# ---------------------------------------------------------------------------
# first phase: parts V_k .. V_3


class Parts:
    def __init__(self, g: Graph, col: NormalizedColouring):
        self.g = g
        self.col = col
        self.part = col.part_of()
        self.k = col.k

    def nbrs(self, v: int, j: int) -> list[int]:
        return [w for w in self.g.neighbors(v) if self.part[w] == j]

    def first(self, v: int, j: int) -> int:
        for w in self.g.neighbors(v):
            if self.part[w] == j:
                return w
        raise ConstructionError(f"vertex {v} has no neighbour in part {j}; colouring is not normalised")


def phase_one(st: LabelState, P: Parts) -> None:
    """Label upward edges of V_k, ..., V_3 (in that order) to reach the per-part targets.

    Even part ``V_2n``: 3-degree exactly ``n`` and odd {2,3}-degree.
    Odd part ``V_2n+1``: 2-degree exactly ``n`` and even {2,3}-degree.
    Both bichromatic; downward edges of odd parts carry 1/3, of even parts 1/2.
    """
    for i in range(P.k, 2, -1):
        n = i // 2
        for v in P.col.parts[i - 1]:
            if i % 2 == 0:
                stage = f"phase1-V{i}"
                for j in [2] + list(range(3, 2 * n, 2)):
                    st.set(v, P.first(v, j), 3, stage, "3-degree")
                d2 = st.d(v, 2)
                want = (n + 1) % 2
                if d2 % 2 != want:
                    st.set(v, P.first(v, 1), 2, stage, "parity")
                elif d2 == 0:
                    st.set(v, P.first(v, 4), 2, stage, "bichromatic")
                    st.set(v, P.first(v, 1), 2, stage, "bichromatic")
            else:
                stage = f"phase1-V{i}"
                for j in [1] + list(range(4, 2 * n + 1, 2)):
                    st.set(v, P.first(v, j), 2, stage, "2-degree")
                d3 = st.d(v, 3)
                if d3 % 2 != n % 2:
                    st.set(v, P.first(v, 2), 3, stage, "parity")
                elif d3 == 0:
                    twos = P.nbrs(v, 2)
                    if len(twos) >= 2:
                        st.set(v, twos[0], 3, stage, "bichromatic-two-V2")
                        st.set(v, twos[1], 3, stage, "bichromatic-two-V2")
                    else:
                        st.set(v, twos[0], 3, stage, "bichromatic-V2-V3")
                        st.set(v, P.first(v, 3), 3, stage, "bichromatic-V2-V3")


def phase_one_milestones(st: LabelState, P: Parts, trace: ConstructionTrace) -> bool:
    ok = True
    for i in range(1, P.k + 1):
        vs = P.col.parts[i - 1]
        if i == 1:
            good = all(st.mono(v) in (1, 2) for v in vs)
            name = "V1 1- or 2-monochromatic"
        elif i == 2:
            good = all(st.mono(v) in (1, 3) for v in vs)
            name = "V2 1- or 3-monochromatic"
        elif i % 2 == 0:
            n = i // 2
            good = all(st.mono(v) == 0 and st.d(v, 3) == n and (st.d(v, 2) + n) % 2 == 1 for v in vs)
            name = f"V{i} bichromatic, 3-degree {n}, odd {{2,3}}-degree"
        else:
            n = i // 2
            good = all(st.mono(v) == 0 and st.d(v, 2) == n and (st.d(v, 3) + n) % 2 == 0 for v in vs)
            name = f"V{i} bichromatic, 2-degree {n}, even {{2,3}}-degree"
        ok &= trace.milestone(f"phase1:{name}", good)
    return ok


# ---------------------------------------------------------------------------
# second phase: edges between V_1 and V_2


def _h_edges(st: LabelState, P: Parts) -> list[int]:
    ones2 = {v for v in P.col.parts[1] if st.mono(v) == 1}
    return [
        i for i, (u, v) in enumerate(P.g.edges.tolist())
        if (u in ones2 and P.part[v] == 1) or (v in ones2 and P.part[u] == 1)
    ]


def phase_two(st: LabelState, P: Parts, trace: ConstructionTrace) -> None:
    g = P.g
    he = _h_edges(st, P)
    h_verts = sorted({int(x) for i in he for x in g.edges[i]})
    h2 = [v for v in h_verts if P.part[v] == 2]
    h1 = [v for v in h_verts if P.part[v] == 1]
    # step 1
    changed = True
    while changed:
        changed = False
        for v in h2:
            if st.mono(v) != 1:
                continue
            ups = P.nbrs(v, 1)
            ones = [u for u in ups if st.mono(u) == 1]
            if len(ones) < 2:
                continue
            special = [u for u in ups if st.mono(u) == 2 and st.d(u, 2) == 2]
            if special:
                st.set(special[0], v, 3, "phase2-step1", "special")
            else:
                st.set(v, ones[0], 2, "phase2-step1", "two-2")
                st.set(v, ones[1], 2, "phase2-step1", "two-2")
            changed = True
    # step 2
    changed = True
    while changed:
        changed = False
        for u in h1:
            if st.mono(u) != 1:
                continue
            downs = P.nbrs(u, 2)
            ones = [v for v in downs if st.mono(v) == 1]
            if len(ones) >= 2 and not any(st.mono(v) == 3 for v in downs):
                st.set(u, ones[0], 3, "phase2-step2", "two-3")
                st.set(u, ones[1], 3, "phase2-step2", "two-3")
                changed = True
    # components of the remaining 1-monochromatic part of H
    ones = {v for v in h_verts if st.mono(v) == 1}
    be = [i for i in he if int(g.edges[i, 0]) in ones and int(g.edges[i, 1]) in ones]
    big = [(bv, bes) for bv, bes in _components(sorted(ones), be, g) if len(bv) >= 3]
    stars = all(
        len(bes) == len(bv) - 1 and sum(1 for x in bv if P.part[x] == 1) == 1 for bv, bes in big
    )
    trace.milestone("phase2:large residual components are stars centred in V1", stars)
    if not big:
        return
    centre_of = {}
    leaves_of = {}
    for bv, _ in big:
        c = next(x for x in bv if P.part[x] == 1)
        for x in bv:
            centre_of[x] = c
        leaves_of[c] = [x for x in bv if x != c]
    c_verts = set(centre_of)
    ce = set()
    for i in be:
        if int(g.edges[i, 0]) in c_verts:
            ce.add(i)
    for x in list(c_verts):
        if P.part[x] == 1:
            for w in P.nbrs(x, 2):
                if st.mono(w) == 3:
                    ce.add(g.edge_index(x, w))
    comp_verts = sorted({int(x) for i in ce for x in g.edges[i]})
    for cv, ces in _components(comp_verts, sorted(ce), g):
        in_c = set(cv)
        cdeg = {x: 0 for x in cv}
        for i in ces:
            for x in g.edges[i]:
                cdeg[int(x)] += 1
        centre = min(x for x in cv if x in leaves_of)
        leaves = [x for x in leaves_of[centre] if cdeg[x] == 1]
        if len(leaves) >= 2:
            free = leaves[1]
        else:
            free = min(x for x in cv if P.part[x] == 2)
            trace.anomalies.append(f"star at {centre} has fewer than two pendant leaves")
        targets = {x: (1 if P.part[x] == 2 else 0) for x in in_c if x != free}
        left = switch_on_state(st, ces, (1, 3), targets, free, "phase2-relabel", "1-3 parity")
        trace.milestone("phase2:1-3 parity targets met", not left, f"unmet {left}" if left else "")


# ---------------------------------------------------------------------------
# entry point


def _high_chromatic(sub: Graph, col: NormalizedColouring, trace: ConstructionTrace) -> EdgeLabelling:
    st = LabelState(sub, trace)
    P = Parts(sub, col)
    phase_one(st, P)
    if not phase_one_milestones(st, P, trace):
        raise ConstructionError("first-phase targets not met", trace=trace)
    phase_two(st, P, trace)
    return st.result()


def _solve_component(sub: Graph, trace: ConstructionTrace, colour_seconds) -> EdgeLabelling:
    if sub.n == 2:
        return EdgeLabelling(sub, [1], 3)
    parts = optimal_colouring(sub, colour_seconds)
    k = len(parts)
    if k <= 3:
        return oracle_p_proper(sub, trace)
    if k == 4:
        lab, t = label_four_chromatic(sub, parts)
        trace.extend(t)
        return lab
    return _high_chromatic(sub, normalize_colouring(sub, parts), trace)


def label_generic(g: Graph, colour_seconds: float | None = DEFAULT_MAX_SECONDS,
                  repair: bool = True) -> Construction:
    """3-labelling where ``S_1`` induces a matching plus isolated vertices and every other class is independent.

    Components are labelled independently. A final conformance check runs on
    the whole output; if it fails, a bounded repair is attempted and recorded
    as an anomaly in the trace.
    """
    trace = ConstructionTrace("generic")
    labels = per_component(g, trace, 3, lambda sub, t: _solve_component(sub, t, colour_seconds))
    lab = EdgeLabelling(g, labels, 3)
    rep = check_shape(g, lab, Requirement.S1_MATCHING)
    if not rep.ok:
        trace.anomalies.append(f"repair pass: {len(rep.report.conflicts)} conflicts, worst {rep.report.worst}")
        if not repair:
            raise ConstructionError("output does not conform", trace=trace, report=rep.report)
        try:
            fixed = repair_conflicts(g, lab, Requirement.S1_MATCHING)
        except RepairFailed as exc:
            raise ConstructionError("output does not conform and repair failed", trace=trace,
                                    report=exc.report) from exc
        changed = np.nonzero(fixed.labels != lab.labels)[0]
        for x in (1, 2, 3):
            trace.record(changed[fixed.labels[changed] == x], x, "repair", "S1-matching")
        lab = fixed
    trace.milestone("final:S1 matching, other classes independent", check_shape(g, lab, "s1-matching").ok)
    return Construction(lab, trace, Requirement.S1_MATCHING)
