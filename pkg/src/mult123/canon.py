"""Canonical labelling of small graphs by individualisation-refinement.

The search tree is explored completely (no automorphism pruning) except that
only one vertex per twin class of the target cell is individualised: swapping
two twins is an automorphism fixing every other vertex, so their subtrees
yield the same best certificate.
"""

from __future__ import annotations

import numpy as np

from ._kernels import certificate, refine_colours
from .graph import Graph

MAX_CANON_N = 11


def _individualise(col: np.ndarray, v: int) -> np.ndarray:
    new = col.copy()
    p = col[v]
    new[(col == p)] = p + 1
    new[v] = p
    return new


def canonical_code(adj: np.ndarray) -> int:
    """Largest leaf certificate of the refinement tree of ``adj``."""
    n = adj.shape[0]
    if n > MAX_CANON_N:
        raise ValueError(f"canonical codes are limited to n <= {MAX_CANON_N}")
    if n <= 1:
        return 0
    rows = [int(sum(1 << int(w) for w in np.nonzero(adj[v])[0])) for v in range(n)]
    best = -1
    stack = [refine_colours(adj, np.zeros(n, dtype=np.int64))]
    while stack:
        col = stack.pop()
        counts = np.bincount(col, minlength=n)
        big = np.nonzero(counts > 1)[0]
        if len(big) == 0:
            code = int(certificate(adj, col))
            if code > best:
                best = code
            continue
        cell = int(big[0])
        members = np.nonzero(col == cell)[0].tolist()
        reps: list[int] = []
        for v in members:
            rv = rows[v]
            twin = False
            for r in reps:
                if (rows[r] & ~(1 << v)) == (rv & ~(1 << r)):
                    twin = True
                    break
            if not twin:
                reps.append(v)
        for v in reversed(reps):
            stack.append(refine_colours(adj, _individualise(col, v)))
    return best


def graph_from_code(n: int, code: int) -> Graph:
    nbits = n * (n - 1) // 2
    edges = []
    pos = nbits - 1
    for j in range(1, n):
        for i in range(j):
            if (code >> pos) & 1:
                edges.append((i, j))
            pos -= 1
    return Graph(n, edges)


def canonical_form(g: Graph) -> tuple[int, Graph]:
    code = canonical_code(g.adjacency_matrix())
    return code, graph_from_code(g.n, code)


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    return canonical_code(g.adjacency_matrix()) == canonical_code(h.adjacency_matrix())
