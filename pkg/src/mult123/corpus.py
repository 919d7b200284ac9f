"""Isomorphism-free generation of small connected graphs, plus random families.

Connected graphs on ``n`` vertices are grown from those on ``n - 1`` by adding
a vertex joined to a nonempty subset of the old vertices, then deduplicated by
canonical code. Every connected graph has a non-cut vertex, so this reaches
all of them; with ``max_degree`` the same holds inside the degree-bounded
family because deleting a vertex never raises a degree.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .canon import MAX_CANON_N, canonical_code, graph_from_code
from .graph import Graph, is_connected

MAX_BUILTIN_N = 10

# Connected graphs on n vertices (OEIS A001349) and connected cubic graphs
# on n vertices (A002851); used as sanity checks on the generator.
CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}
CUBIC_COUNTS = {4: 1, 6: 2, 8: 5, 10: 19}


@lru_cache(maxsize=None)
def _codes(n: int, max_degree: int | None) -> tuple[int, ...]:
    if n < 1:
        return ()
    if n == 1:
        return (0,)
    if n > MAX_CANON_N:
        raise ValueError(f"built-in enumeration supports n <= {MAX_CANON_N}")
    found = set()
    adj = np.zeros((n, n), dtype=np.uint8)
    for code in _codes(n - 1, max_degree):
        parent = graph_from_code(n - 1, code)
        adj[:] = 0
        if parent.m:
            adj[parent.edges[:, 0], parent.edges[:, 1]] = 1
            adj[parent.edges[:, 1], parent.edges[:, 0]] = 1
        deg = parent.degrees
        if max_degree is None:
            pool = list(range(n - 1))
            top = n - 1
        else:
            pool = [v for v in range(n - 1) if deg[v] < max_degree]
            top = min(max_degree, len(pool))
        last = n - 1
        for size in range(1, top + 1):
            for subset in combinations(pool, size):
                s = list(subset)
                adj[last, :] = 0
                adj[:, last] = 0
                adj[last, s] = 1
                adj[s, last] = 1
                found.add(canonical_code(adj))
    return tuple(sorted(found))


def connected_graphs(n: int, max_degree: int | None = None) -> list[Graph]:
    """All connected graphs on ``n`` vertices up to isomorphism, in canonical form.

    Order is deterministic (ascending canonical code).
    """
    if n > MAX_BUILTIN_N:
        raise ValueError(f"built-in enumerator is limited to n <= {MAX_BUILTIN_N}")
    return [graph_from_code(n, c) for c in _codes(n, max_degree)]


def connected_graphs_upto(max_n: int, max_degree: int | None = None, min_n: int = 1):
    out = []
    for n in range(min_n, max_n + 1):
        out.extend(connected_graphs(n, max_degree))
    return out


def cubic_graphs(n: int) -> list[Graph]:
    return [g for g in connected_graphs(n, max_degree=3) if g.m == 3 * n // 2 and g.min_degree == 3]


# ---------------------------------------------------------------------------
# random families


def gnp(n: int, p: float, rng: np.random.Generator) -> Graph:
    iu = np.triu_indices(n, 1)
    keep = rng.random(len(iu[0])) < p
    return Graph(n, np.stack([iu[0][keep], iu[1][keep]], axis=1))


def random_connected_bipartite(n: int, rng: np.random.Generator, extra: float = 1.0) -> Graph:
    """Random spanning tree with alternating sides plus ``extra * n`` cross edges."""
    if n < 2:
        return Graph(max(n, 0))
    side = rng.integers(0, 2, size=n)
    side[0], side[1] = 0, 1
    order = rng.permutation(n)
    edges = set()
    zeros = [v for v in order if side[v] == 0]
    ones = [v for v in order if side[v] == 1]
    # grow a tree: attach each vertex to a random earlier vertex on the other side
    placed = {0: [zeros[0]], 1: [ones[0]]}
    edges.add((min(zeros[0], ones[0]), max(zeros[0], ones[0])))
    rest = [v for v in order if v not in (zeros[0], ones[0])]
    for v in rest:
        other = placed[1 - side[v]]
        u = other[int(rng.integers(len(other)))]
        edges.add((min(u, v), max(u, v)))
        placed[side[v]].append(v)
    target = len(edges) + int(extra * n)
    tries = 0
    while len(edges) < target and tries < 20 * n:
        tries += 1
        a = zeros[int(rng.integers(len(zeros)))]
        b = ones[int(rng.integers(len(ones)))]
        edges.add((min(a, b), max(a, b)))
    return Graph(n, sorted(edges))


def random_subcubic(n: int, rng: np.random.Generator) -> Graph:
    """Configuration-model pairing of 3 stubs per vertex, loops and repeats dropped."""
    stubs = rng.permutation(np.repeat(np.arange(n), 3))
    if len(stubs) % 2:
        stubs = stubs[:-1]
    pairs = stubs.reshape(-1, 2)
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    pairs = np.unique(np.sort(pairs, axis=1), axis=0)
    return Graph(n, pairs)


def random_connected_gnp(n: int, p: float, rng: np.random.Generator, tries: int = 1000) -> Graph:
    for _ in range(tries):
        g = gnp(n, p, rng)
        if is_connected(g):
            return g
    raise RuntimeError("could not sample a connected graph")
