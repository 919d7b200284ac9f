import itertools

import numpy as np
import pytest

from mult123.graph import Graph


def g6_reference(n: int, edges) -> bytes:
    """Straightforward graph6 encoder, bit by bit, for cross-checking."""
    if n <= 62:
        head = [n + 63]
    elif n <= 258047:
        head = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        head = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    es = {(min(u, v), max(u, v)) for u, v in edges}
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if (i, j) in es else 0)
    while len(bits) % 6:
        bits.append(0)
    body = []
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i:i + 6]:
            val = 2 * val + b
        body.append(val + 63)
    return bytes(head + body)


def brute_force_classes(n: int, connected_only: bool = True) -> set[int]:
    """Canonical bitmasks (minimum over all vertex permutations) of graphs on n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    nb = len(pairs)
    masks = np.arange(1 << nb, dtype=np.int64)
    if connected_only and n > 1:
        masks = masks[[_connected_mask(n, pairs, int(x)) for x in masks]]
    elif connected_only and n == 0:
        return set()
    if n <= 1:
        return {int(x) for x in masks}
    best = masks.copy()
    index = {p: i for i, p in enumerate(pairs)}
    for perm in itertools.permutations(range(n)):
        out = np.zeros_like(masks)
        for i, (u, v) in enumerate(pairs):
            a, b = perm[u], perm[v]
            j = index[(min(a, b), max(a, b))]
            out |= ((masks >> i) & 1) << j
        np.minimum(best, out, out=best)
    return {int(x) for x in np.unique(best)}


def _connected_mask(n, pairs, mask) -> bool:
    adj = [[] for _ in range(n)]
    for i, (u, v) in enumerate(pairs):
        if mask >> i & 1:
            adj[u].append(v)
            adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def graph_mask(g: Graph) -> int:
    pairs = list(itertools.combinations(range(g.n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    return sum(1 << index[(u, v)] for u, v in g.edge_list())


def min_mask(g: Graph) -> int:
    best = None
    for perm in itertools.permutations(range(g.n)):
        val = graph_mask(g.relabel(perm))
        best = val if best is None else min(best, val)
    return best if best is not None else 0


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
