"""Simple undirected graphs, graph6 / edge-list I/O and structure queries."""

from __future__ import annotations

import re
import warnings
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DisconnectedGraphError,
    DuplicateEdgeWarning,
    EdgeListError,
    Graph6Error,
    GraphError,
    NotBipartiteError,
)

GRAPH6_HEADER = b">>graph6<<"


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``edges`` is an ``(m, 2)`` int64 array with ``u < v`` in every row, rows in
    lexicographic order. Every labelling in the package is an array aligned
    with this row order.
    """

    __slots__ = ("n", "edges", "_nbrs", "_adj", "_index", "_deg", "_csr", "_hash")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] | np.ndarray = ()):
        n = int(n)
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, 2), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise GraphError("edges must be pairs")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise GraphError(f"edge endpoint out of range 0..{n - 1}")
        loops = arr[:, 0] == arr[:, 1]
        if loops.any():
            v = int(arr[loops][0, 0])
            raise GraphError(f"self-loop at vertex {v}")
        arr = np.sort(arr, axis=1)
        order = np.lexsort((arr[:, 1], arr[:, 0]))
        arr = np.ascontiguousarray(arr[order])
        if len(arr) > 1:
            dup = np.all(arr[1:] == arr[:-1], axis=1)
            if dup.any():
                u, v = arr[1:][dup][0]
                raise GraphError(f"parallel edge {int(u)}-{int(v)}")
        arr.setflags(write=False)
        self.n = n
        self.edges = arr
        self._nbrs = None
        self._adj = None
        self._index = None
        self._deg = None
        self._csr = None
        self._hash = None

    # -- basic accessors -------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> np.ndarray:
        if self._deg is None:
            deg = np.bincount(self.edges.ravel(), minlength=self.n).astype(np.int64)
            deg.setflags(write=False)
            self._deg = deg
        return self._deg

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    @property
    def min_degree(self) -> int:
        return int(self.degrees.min()) if self.n else 0

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Sorted neighbours of ``v``."""
        if self._nbrs is None:
            nb: list[list[int]] = [[] for _ in range(self.n)]
            for u, w in self.edges.tolist():
                nb[u].append(w)
                nb[w].append(u)
            self._nbrs = tuple(tuple(sorted(x)) for x in nb)
        return self._nbrs[v]

    @property
    def adj(self) -> tuple[frozenset, ...]:
        if self._adj is None:
            self._adj = tuple(frozenset(self.neighbors(v)) for v in range(self.n))
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edge_index(self, u: int, v: int) -> int:
        """Row of ``{u, v}`` in :attr:`edges`; ``KeyError`` if absent."""
        if self._index is None:
            self._index = {(a, b): i for i, (a, b) in enumerate(self.edges.tolist())}
        return self._index[(u, v) if u < v else (v, u)]

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` adjacency with sorted neighbour lists."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            indptr[1:] = np.cumsum(self.degrees)
            indices = np.fromiter(
                (w for v in range(self.n) for w in self.neighbors(v)), dtype=np.int64, count=2 * self.m
            )
            self._csr = (indptr, indices)
        return self._csr

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        if self.m:
            a[self.edges[:, 0], self.edges[:, 1]] = 1
            a[self.edges[:, 1], self.edges[:, 0]] = 1
        return a

    def edge_list(self) -> list[tuple[int, int]]:
        return [tuple(e) for e in self.edges.tolist()]

    # -- value semantics -------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.edges.tobytes()))
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __getstate__(self):
        return (self.n, self.edges)

    def __setstate__(self, state):
        n, edges = state
        Graph.__init__(self, n, edges)

    # -- constructors ----------------------------------------------------
    @classmethod
    def from_adjacency(cls, matrix) -> "Graph":
        a = np.asarray(matrix)
        iu = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], np.stack(iu, axis=1))

    @classmethod
    def from_labelled_edges(cls, pairs: Iterable[tuple]) -> tuple["Graph", list]:
        """Compact arbitrary hashable vertex names to ``0..n-1``.

        Returns the graph and ``names`` with ``names[i]`` the original name of
        vertex ``i`` (names sorted when comparable, else first-seen order).
        """
        pairs = list(pairs)
        seen = {}
        for u, v in pairs:
            seen.setdefault(u, None)
            seen.setdefault(v, None)
        names = list(seen)
        try:
            names.sort()
        except TypeError:
            pass
        ids = {name: i for i, name in enumerate(names)}
        edges = {tuple(sorted((ids[u], ids[v]))) for u, v in pairs}
        return cls(len(names), sorted(edges)), names

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        p = np.asarray(perm, dtype=np.int64)
        return Graph(self.n, p[self.edges]) if self.m else Graph(self.n)


@dataclass(frozen=True)
class Layering:
    root: int
    layers: tuple[tuple[int, ...], ...]

    def layer_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}

    @property
    def depth(self) -> int:
        return len(self.layers) - 1


# ---------------------------------------------------------------------------
# graph6


def _n_to_bytes(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise GraphError("graph too large for graph6")


def to_graph6(g: Graph, header: bool = False) -> bytes:
    """graph6 encoding of ``g`` under its own vertex order."""
    n = g.n
    nbits = n * (n - 1) // 2
    bits = np.zeros(nbits + (-nbits) % 6, dtype=np.uint8)
    if g.m:
        u, v = g.edges[:, 0], g.edges[:, 1]
        bits[v * (v - 1) // 2 + u] = 1
    groups = bits.reshape(-1, 6)
    values = groups @ np.array([32, 16, 8, 4, 2, 1], dtype=np.int64) + 63
    out = _n_to_bytes(n) + values.astype(np.uint8).tobytes()
    return (GRAPH6_HEADER + out) if header else out


def parse_graph6(text: bytes | str) -> Graph:
    """Decode one graph6 line (optionally with the ``>>graph6<<`` header)."""
    data = text.encode("ascii") if isinstance(text, str) else bytes(text)
    data = data.strip()
    base = 0
    if data.startswith(GRAPH6_HEADER):
        data = data[len(GRAPH6_HEADER):]
        base = len(GRAPH6_HEADER)
    if not data:
        raise Graph6Error("empty graph6 string", base)
    for i, b in enumerate(data):
        if b < 63 or b > 126:
            raise Graph6Error(f"byte {b!r} outside 63..126", base + i)
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise Graph6Error("truncated 8-byte length prefix", base)
        n = 0
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
        pos = 8
        if n <= 258047:
            raise Graph6Error("non-canonical 8-byte length prefix", base)
    else:
        if len(data) < 4:
            raise Graph6Error("truncated 4-byte length prefix", base)
        n = 0
        for b in data[1:4]:
            n = (n << 6) | (b - 63)
        pos = 4
        if n <= 62:
            raise Graph6Error("non-canonical 4-byte length prefix", base)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise Graph6Error(f"expected {need} data bytes for n={n}, got {len(body)}", base + pos)
    if need == 0:
        return Graph(n)
    vals = np.frombuffer(body, dtype=np.uint8) - 63
    bits = np.unpackbits(vals[:, None], axis=1)[:, 2:].ravel()
    if bits[nbits:].any():
        raise Graph6Error("nonzero padding bits", base + pos + need - 1)
    idx = np.nonzero(bits[:nbits])[0]
    # position p = v(v-1)/2 + u with u < v
    v = ((1 + np.sqrt(1 + 8 * idx.astype(np.float64))) // 2).astype(np.int64)
    v[v * (v - 1) // 2 > idx] -= 1
    v[(v + 1) * v // 2 <= idx] += 1
    u = idx - v * (v - 1) // 2
    return Graph(n, np.stack([u, v], axis=1))


def iter_graph6(lines: Iterable[bytes | str]):
    """Yield ``(line_number, Graph | Graph6Error)`` for each nonblank line."""
    for i, line in enumerate(lines, 1):
        raw = line.strip() if isinstance(line, (bytes, str)) else line
        if not raw:
            continue
        try:
            yield i, parse_graph6(raw)
        except Graph6Error as exc:
            yield i, exc


# ---------------------------------------------------------------------------
# edge lists

_INT = re.compile(r"^[0-9]+$")


def parse_edge_list(text: str | bytes) -> Graph:
    """Parse ``u v`` lines with an optional leading ``n <count>`` line.

    Blank lines and ``#`` comments are ignored. Duplicate edges are collapsed
    with a :class:`DuplicateEdgeWarning`; self-loops are errors.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    declared = None
    edges: dict[tuple[int, int], int] = {}
    first = True
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if first and tokens[0] == "n":
            first = False
            if len(tokens) != 2 or not _INT.match(tokens[1]):
                raise EdgeListError(f"malformed vertex-count line {raw!r}", lineno)
            declared = int(tokens[1])
            continue
        first = False
        if len(tokens) != 2:
            raise EdgeListError(f"expected two vertex ids, got {raw!r}", lineno)
        for t in tokens:
            if not _INT.match(t):
                raise EdgeListError(f"non-integer token {t!r}", lineno)
        u, v = int(tokens[0]), int(tokens[1])
        if u == v:
            raise EdgeListError(f"self-loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in edges:
            warnings.warn(
                f"line {lineno}: duplicate edge {key[0]}-{key[1]} (first on line {edges[key]}) collapsed",
                DuplicateEdgeWarning,
                stacklevel=2,
            )
            continue
        edges[key] = lineno
    top = max((v for e in edges for v in e), default=-1) + 1
    if declared is not None:
        if declared < top:
            raise EdgeListError(f"declared n={declared} but vertex {top - 1} used")
        top = declared
    return Graph(top, sorted(edges))


def to_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges.tolist()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# structure queries


def bfs_order(g: Graph, root: int) -> tuple[list[int], list[int]]:
    """Vertices reachable from ``root`` in BFS order, and their distances (-1 if unreached)."""
    dist = [-1] * g.n
    dist[root] = 0
    order = [root]
    q = deque([root])
    while q:
        x = q.popleft()
        for y in g.neighbors(x):
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                order.append(y)
                q.append(y)
    return order, dist


def bfs_layers(g: Graph, root: int) -> Layering:
    if not 0 <= root < g.n:
        raise GraphError(f"root {root} out of range")
    _, dist = bfs_order(g, root)
    unreached = [v for v in range(g.n) if dist[v] < 0]
    if unreached:
        raise DisconnectedGraphError(f"graph is disconnected; unreached vertices {unreached}", unreached)
    depth = max(dist)
    layers: list[list[int]] = [[] for _ in range(depth + 1)]
    for v in range(g.n):
        layers[dist[v]].append(v)
    return Layering(root, tuple(tuple(layer) for layer in layers))


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by smallest vertex."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        order, _ = bfs_order(g, s)
        for v in order:
            seen[v] = True
        comps.append(sorted(order))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(bfs_order(g, 0)[0]) == g.n


def is_nice(g: Graph) -> bool:
    """True iff no component is a ``K_2``."""
    deg = g.degrees
    if g.m == 0:
        return True
    u, v = g.edges[:, 0], g.edges[:, 1]
    return not bool(np.any((deg[u] == 1) & (deg[v] == 1)))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph induced by ``vertices``; ``mapping[i]`` is the original id of new vertex ``i``."""
    mapping = sorted(set(int(v) for v in vertices))
    if mapping and (mapping[0] < 0 or mapping[-1] >= g.n):
        raise GraphError("vertex id out of range")
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[mapping] = np.arange(len(mapping))
    if g.m:
        e = new_id[g.edges]
        e = e[(e >= 0).all(axis=1)]
    else:
        e = np.zeros((0, 2), dtype=np.int64)
    return Graph(len(mapping), e), mapping


def bipartition(g: Graph) -> list[int]:
    """Side (0/1) of every vertex; raises :class:`NotBipartiteError` with an odd cycle."""
    side = [-1] * g.n
    parent = [-1] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        q = deque([s])
        while q:
            x = q.popleft()
            for y in g.neighbors(x):
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    parent[y] = x
                    q.append(y)
                elif side[y] == side[x]:
                    raise NotBipartiteError(_odd_cycle(parent, x, y))
    return side


def _odd_cycle(parent, x, y):
    px = [x]
    while parent[px[-1]] >= 0:
        px.append(parent[px[-1]])
    py = [y]
    while parent[py[-1]] >= 0:
        py.append(parent[py[-1]])
    common = set(px) & set(py)
    ix = next(i for i, v in enumerate(px) if v in common)
    iy = py.index(px[ix])
    return px[: ix + 1] + py[:iy][::-1]


def is_bipartite(g: Graph) -> bool:
    try:
        bipartition(g)
    except NotBipartiteError:
        return False
    return True


def is_regular(g: Graph) -> bool:
    return g.n == 0 or int(g.degrees.min()) == int(g.degrees.max())


def is_complete(g: Graph) -> bool:
    return g.m == g.n * (g.n - 1) // 2


# ---------------------------------------------------------------------------
# named graphs


def complete_graph(n: int) -> Graph:
    iu = np.triu_indices(n, 1)
    return Graph(n, np.stack(iu, axis=1))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """``K_{1,leaves}`` with the centre at vertex 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_multipartite(*sizes: int) -> Graph:
    part = np.repeat(np.arange(len(sizes)), sizes)
    n = len(part)
    iu = np.triu_indices(n, 1)
    keep = part[iu[0]] != part[iu[1]]
    return Graph(n, np.stack([iu[0][keep], iu[1][keep]], axis=1))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    off = 0
    parts = []
    for h in graphs:
        if h.m:
            parts.append(h.edges + off)
        off += h.n
    return Graph(off, np.concatenate(parts) if parts else ())
