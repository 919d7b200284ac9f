"""p-proper 3-labellings of 4-chromatic graphs."""

from __future__ import annotations

from collections import deque
from typing import Sequence

from ..colouring import NormalizedColouring, normalize_colouring, optimal_colouring
from ..errors import ConstructionError, PreconditionError
from ..graph import Graph, is_nice
from ..labelling import Requirement, conflicts
from ._state import LabelState
from .parity import switch_on_state
from .trace import Construction, ConstructionTrace


def _components(vertices, edge_ids, g: Graph) -> list[tuple[list[int], list[int]]]:
    """Connected components of the subgraph formed by ``edge_ids``: (vertices, edge ids)."""
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in vertices}
    for i in edge_ids:
        u, v = (int(x) for x in g.edges[i])
        adj[u].append((v, i))
        adj[v].append((u, i))
    seen: set[int] = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        seen.add(s)
        vs, es = [s], set()
        q = deque([s])
        while q:
            x = q.popleft()
            for y, i in adj[x]:
                es.add(i)
                if y not in seen:
                    seen.add(y)
                    vs.append(y)
                    q.append(y)
        out.append((sorted(vs), sorted(es)))
    return out


class _Ctx:
    def __init__(self, g: Graph, col: NormalizedColouring, trace: ConstructionTrace):
        self.g = g
        self.part = col.part_of()
        self.parts = col.parts
        self.st = LabelState(g, trace)
        self.trace = trace

    def nbrs(self, v: int, *parts: int) -> list[int]:
        return [w for w in self.g.neighbors(v) if self.part[w] in parts]


def _invariants_v3_v4(c: _Ctx, tag: str) -> bool:
    st = c.st
    ok4 = all(st.mono(v) == 0 and st.d(v, 3) % 2 == 0 for v in c.parts[3])
    ok3 = all(st.mono(v) == 0 and st.d(v, 3) % 2 == 1 for v in c.parts[2])
    c.trace.milestone(f"{tag}:V4 bichromatic, even 3-degree", ok4)
    c.trace.milestone(f"{tag}:V3 bichromatic, odd 3-degree", ok3)
    return ok4 and ok3


def _step1(c: _Ctx) -> None:
    st = c.st
    for v in c.parts[3]:
        for u in c.nbrs(v, 1):
            st.set(v, u, 2, "step1-V4", "to-V1")
        for u in c.nbrs(v, 3):
            st.set(v, u, 3, "step1-V4", "to-V3")
        if st.d(v, 3) % 2 == 1:
            st.set(v, c.nbrs(v, 2)[0], 3, "step1-V4", "parity")
    for v in c.parts[2]:
        for u in c.nbrs(v, 1):
            st.set(v, u, 2, "step1-V3", "to-V1")
        if st.d(v, 3) % 2 == 0:
            st.set(v, c.nbrs(v, 2)[0], 3, "step1-V3", "parity")
    _invariants_v3_v4(c, "step1")
    ok2 = all(
        all(st.label(v, w) in (1, 3) for w in c.nbrs(v, 3, 4)) and all(st.label(v, w) == 1 for w in c.nbrs(v, 1))
        for v in c.parts[1]
    )
    ok1 = all(
        all(st.label(v, w) == 2 for w in c.nbrs(v, 3, 4)) and all(st.label(v, w) == 1 for w in c.nbrs(v, 2))
        for v in c.parts[0]
    )
    c.trace.milestone("step1:V2 downward 1 or 3, upward 1", ok2)
    c.trace.milestone("step1:V1 downward to V3/V4 labelled 2, to V2 labelled 1", ok1)


def _switch(c: _Ctx, vertices, edge_ids, free, odd_part: int, case: str) -> None:
    """Relabel with 1/2 so that ``odd_part`` vertices get odd 2-degree, the others even."""
    targets = {v: (1 if c.part[v] == odd_part else 0) for v in vertices if v != free}
    left = switch_on_state(c.st, edge_ids, (1, 2), targets, free, "step2", case)
    c.trace.milestone(f"step2:{case}:parity targets met", not left, f"unmet {left}" if left else "")


def _component(c: _Ctx, hv: list[int], he: list[int]) -> None:
    st, g = c.st, c.g
    in_h = set(hv)
    h1 = [v for v in hv if c.part[v] == 1]
    h2 = [v for v in hv if c.part[v] == 2]
    # Case 1: a V2 vertex of H with a neighbour in V3 u V4
    for v in h2:
        up = c.nbrs(v, 3, 4)
        if up:
            w = up[0]
            _switch(c, hv, he, v, 2, "case1")
            if st.d(v, 2) % 2 == 0:
                st.set(v, w, 2, "step2", "case1")
            return
    # Case 2: a 1-monochromatic V1 vertex with a 3-monochromatic V2 neighbour
    for u in h1:
        if st.mono(u) != 1:
            continue
        three = [v for v in c.nbrs(u, 2) if st.mono(v) == 3]
        if three:
            _switch(c, hv, he, u, 2, "case2")
            if st.d(u, 2) % 2 == 1:
                st.set(u, three[0], 3, "step2", "case2")
            return
    # Case 3: a 1-monochromatic V1 vertex with at least two V2 neighbours in H
    for u in h1:
        if st.mono(u) != 1:
            continue
        vs = [v for v in c.nbrs(u, 2) if v in in_h]
        if len(vs) < 2:
            continue
        rest = [i for i in he if u not in g.edges[i]]
        for cv, ce in _components([x for x in hv if x != u], rest, g):
            free = min(x for x in cv if x in vs)
            if ce:
                _switch(c, cv, ce, free, 2, "case3")
        for v in vs:
            st.set(u, v, 3, "step2", "case3")
        return
    # no case applies
    ones1 = [u for u in h1 if st.mono(u) == 1]
    ok_deg = all(g.degree(u) == 1 for u in ones1)
    ok_nb = all(st.mono(w) != 0 for x in hv if st.mono(x) == 1 for w in g.neighbors(x))
    c.trace.milestone("step2:residual component invariant", ok_deg and ok_nb)
    changed = True
    while changed:
        changed = False
        for v in h2:
            if st.mono(v) != 1:
                continue
            ones = [u for u in c.nbrs(v, 1) if st.mono(u) == 1]
            if len(ones) >= 2:
                st.set(v, ones[0], 3, "step2", "pendant-pair")
                st.set(v, ones[1], 3, "step2", "pendant-pair")
                changed = True
    for i in he:
        u, v = (int(x) for x in g.edges[i])
        if c.part[u] != 1:
            u, v = v, u
        if st.mono(u) != 1 or st.mono(v) != 1:
            continue
        others = [x for x in c.nbrs(v, 1) if x != u and st.mono(x) == 2 and st.label(v, x) == 1]
        if not others:
            c.trace.milestone("step2:final fix has a 2-monochromatic partner", False, f"edge {u}-{v}")
            continue
        st.set(others[0], v, 2, "step2", "final-fix")
        st.set(v, u, 3, "step2", "final-fix")


def _step2(c: _Ctx) -> None:
    st, g = c.st, c.g
    ones2 = {v for v in c.parts[1] if st.mono(v) == 1}
    he = [
        i for i, (u, v) in enumerate(g.edges.tolist())
        if (u in ones2 and c.part[v] == 1) or (v in ones2 and c.part[u] == 1)
    ]
    verts = sorted({int(x) for i in he for x in g.edges[i]})
    comps = _components(verts, he, g)
    for hv, hes in comps:
        conflicting = any(st.mono(int(a)) == 1 and st.mono(int(b)) == 1 for a, b in g.edges[hes])
        if conflicting:
            _component(c, hv, hes)


def _colouring(g: Graph, parts: Sequence[Sequence[int]] | None) -> NormalizedColouring:
    if parts is None:
        parts = optimal_colouring(g)
    return normalize_colouring(g, parts)


def label_four_chromatic(g: Graph, parts: Sequence[Sequence[int]] | None = None) -> Construction:
    """p-proper 3-labelling of a nice 4-chromatic graph.

    ``parts`` may supply an optimal 4-colouring; it is normalised first so that
    every vertex sees each lower part.
    """
    if not is_nice(g):
        raise PreconditionError("graph has a K_2 component; no p-proper labelling exists")
    col = _colouring(g, parts)
    if col.k != 4:
        raise PreconditionError(f"graph is {col.k}-chromatic, not 4-chromatic; use label_generic")
    trace = ConstructionTrace("four-chromatic")
    c = _Ctx(g, col, trace)
    _step1(c)
    _step2(c)
    _invariants_v3_v4(c, "step2")
    lab = c.st.result()
    rep = conflicts(g, lab)
    trace.milestone("final:p-proper", rep.is_empty, f"{len(rep.conflicts)} conflicts")
    bad = trace.failed_milestones
    if bad:
        raise ConstructionError(f"milestone failed: {bad[0].name}", trace=trace, report=rep)
    return Construction(lab, trace, Requirement.ALL_INDEPENDENT)
