"""p-proper total labellings: edge labels 1..3, vertex labels 1..2."""

from __future__ import annotations

import numpy as np

from ..colouring import DEFAULT_MAX_SECONDS, normalize_colouring, optimal_colouring
from ..errors import ConstructionError
from ..graph import Graph, connected_components, induced_subgraph
from ..labelling import EdgeLabelling, TotalLabelling, total_conflicts
from ._state import LabelState
from .four_chromatic import label_four_chromatic
from .generic import Parts, lift_rows, lift_trace, oracle_p_proper, phase_one, phase_one_milestones
from .trace import Construction, ConstructionTrace


def label_total(g: Graph, colour_seconds: float | None = DEFAULT_MAX_SECONDS) -> Construction:
    """Total labelling whose vertex products (edge labels times own label) are proper.

    For chromatic number at least 5 only the first phase of the generic scheme
    is run, then every vertex of ``V_1`` gets label 2. Smaller chromatic
    numbers use a p-proper edge labelling with all vertex labels 1, except
    ``K_2`` components, which get vertex labels ``(1, 2)``.
    """
    trace = ConstructionTrace("total")
    labels = np.ones(g.m, dtype=np.int64)
    vlab = np.ones(g.n, dtype=np.int64)
    for comp in connected_components(g):
        if len(comp) == 1:
            continue
        sub, mapping = (g, list(range(g.n))) if len(comp) == g.n else induced_subgraph(g, comp)
        rows = lift_rows(g, sub, mapping)
        tag = f"component {comp[0]}"
        local = ConstructionTrace("total")
        if sub.n == 2:
            vlab[mapping[1]] = 2
            lift_trace(trace, local, rows, tag)
            continue
        parts = optimal_colouring(sub, colour_seconds)
        if len(parts) <= 3:
            lab = oracle_p_proper(sub, local)
        elif len(parts) == 4:
            lab, t = label_four_chromatic(sub, parts)
            local.extend(t)
        else:
            col = normalize_colouring(sub, parts)
            st = LabelState(sub, local)
            P = Parts(sub, col)
            phase_one(st, P)
            if not phase_one_milestones(st, P, local):
                raise ConstructionError("first-phase targets not met", trace=local)
            lab = st.result()
            vlab[[mapping[v] for v in col.parts[0]]] = 2
        labels[rows] = lab.labels
        lift_trace(trace, local, rows, tag)
    tl = TotalLabelling(EdgeLabelling(g, labels, 3), vlab)
    bad = total_conflicts(g, tl)
    trace.milestone("final:total p-proper", not bad, f"{len(bad)} conflicts")
    if bad:
        raise ConstructionError(f"total labelling has conflicts {list(bad)[:5]}", trace=trace)
    return Construction(tl, trace, "total-p-proper")
