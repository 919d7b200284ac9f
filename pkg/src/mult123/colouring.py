"""Exact vertex colouring and the move-down normalisation of colourings."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded, ColouringError
from .graph import Graph

DEFAULT_MAX_SECONDS = 60.0


@dataclass(frozen=True)
class NormalizedColouring:
    """Ordered independent parts ``V_1..V_k`` (stored 0-based as ``parts[0..k-1]``).

    Every vertex of ``parts[i]`` (``i >= 1``) has a neighbour in each of
    ``parts[0..i-1]``.
    """

    parts: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.parts)

    def part_of(self) -> list[int]:
        """1-based part index of every vertex."""
        n = sum(len(p) for p in self.parts)
        out = [0] * n
        for i, part in enumerate(self.parts, 1):
            for v in part:
                out[v] = i
        return out


def _masks(g: Graph) -> list[int]:
    return [sum(1 << w for w in g.neighbors(v)) for v in range(g.n)]


def _greedy_clique(g: Graph, masks: list[int]) -> list[int]:
    best: list[int] = []
    order = sorted(range(g.n), key=lambda v: -g.degree(v))
    for s in order:
        clique = [s]
        cand = masks[s]
        while cand:
            # most-connected candidate first
            v = max((w for w in range(g.n) if cand >> w & 1), key=lambda w: (bin(masks[w] & cand).count("1"), -w))
            clique.append(v)
            cand &= masks[v]
        if len(clique) > len(best):
            best = clique
    return best


def _dsatur_greedy(g: Graph, masks: list[int]) -> list[int]:
    n = g.n
    colour = [-1] * n
    for _ in range(n):
        v = max(
            (x for x in range(n) if colour[x] < 0),
            key=lambda x: (len({colour[w] for w in g.neighbors(x) if colour[w] >= 0}), g.degree(x), -x),
        )
        used = {colour[w] for w in g.neighbors(v)}
        c = 0
        while c in used:
            c += 1
        colour[v] = c
    return colour


class _Search:
    def __init__(self, g: Graph, k: int, deadline: float | None):
        self.g = g
        self.k = k
        self.deadline = deadline
        self.colour = [-1] * g.n
        self.forbidden = [0] * g.n  # bitmask of colours used by neighbours
        self.nodes = 0

    def run(self, precolour: Sequence[int]) -> list[int] | None:
        for i, v in enumerate(precolour):
            self.colour[v] = i
        for w in range(self.g.n):
            f = 0
            for x in self.g.neighbors(w):
                if self.colour[x] >= 0:
                    f |= 1 << self.colour[x]
            self.forbidden[w] = f
        return list(self.colour) if self._rec(len(precolour) - 1) else None

    def _rec(self, top: int) -> bool:
        self.nodes += 1
        if self.deadline is not None and (self.nodes & 1023) == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("colouring time budget exceeded", nodes=self.nodes)
        g = self.g
        colour = self.colour
        best = -1
        best_key = None
        for v in range(g.n):
            if colour[v] >= 0:
                continue
            f = self.forbidden[v]
            sat = bin(f).count("1")
            if sat >= self.k:
                return False
            key = (sat, g.degree(v))
            if best_key is None or key > best_key:
                best_key, best = key, v
        if best < 0:
            return True
        f = self.forbidden[best]
        # symmetry breaking: at most one brand-new colour
        for c in range(min(self.k, top + 2)):
            if f >> c & 1:
                continue
            colour[best] = c
            touched = []
            bit = 1 << c
            for w in g.neighbors(best):
                if not self.forbidden[w] & bit:
                    self.forbidden[w] |= bit
                    touched.append(w)
            if self._rec(max(top, c)):
                return True
            for w in touched:
                self.forbidden[w] &= ~bit
            colour[best] = -1
        return False


def _k_colouring(g: Graph, k: int, clique: list[int], deadline) -> list[int] | None:
    if k < len(clique):
        return None
    s = _Search(g, k, deadline)
    return s.run(clique)


def _parts_from_colour(colour: list[int]) -> list[list[int]]:
    k = max(colour) + 1 if colour else 0
    parts: list[list[int]] = [[] for _ in range(k)]
    for v, c in enumerate(colour):
        parts[c].append(v)
    parts = [p for p in parts if p]
    parts.sort(key=lambda p: p[0])
    return parts


def optimal_colouring(g: Graph, max_seconds: float | None = DEFAULT_MAX_SECONDS) -> list[list[int]]:
    """A proper colouring with exactly ``chi(g)`` nonempty parts, ordered by smallest vertex."""
    if g.n == 0:
        return []
    if g.m == 0:
        return [list(range(g.n))]
    deadline = None if max_seconds is None else time.monotonic() + max_seconds
    masks = _masks(g)
    clique = _greedy_clique(g, masks)
    upper = _dsatur_greedy(g, masks)
    best = upper
    ub = max(upper) + 1
    for k in range(len(clique), ub):
        found = _k_colouring(g, k, clique, deadline)
        if found is not None:
            best = found
            break
    return _parts_from_colour(best)


def chromatic_number(g: Graph, max_seconds: float | None = DEFAULT_MAX_SECONDS) -> int:
    return len(optimal_colouring(g, max_seconds))


def is_k_colourable(g: Graph, k: int, max_seconds: float | None = DEFAULT_MAX_SECONDS) -> bool:
    if g.n == 0:
        return True
    if k <= 0:
        return False
    deadline = None if max_seconds is None else time.monotonic() + max_seconds
    clique = _greedy_clique(g, _masks(g)) if g.m else [0]
    return _k_colouring(g, k, clique, deadline) is not None


def check_proper(g: Graph, parts: Sequence[Sequence[int]]) -> list[int]:
    """Validate ``parts`` as a proper colouring covering ``V(g)``; return the 0-based part index per vertex."""
    where = [-1] * g.n
    for i, part in enumerate(parts):
        for v in part:
            if not 0 <= v < g.n:
                raise ColouringError(f"vertex {v} out of range")
            if where[v] >= 0:
                raise ColouringError(f"vertex {v} appears in two parts")
            where[v] = i
    missing = [v for v in range(g.n) if where[v] < 0]
    if missing:
        raise ColouringError(f"vertices {missing} are not coloured")
    for u, v in g.edges.tolist():
        if where[u] == where[v]:
            raise ColouringError(f"edge {u}-{v} inside part {where[u] + 1}", edge=(u, v))
    return where


def normalize_colouring(g: Graph, parts: Sequence[Sequence[int]]) -> NormalizedColouring:
    """Move vertices down until each has a neighbour in every lower part.

    Passes scan vertices in ascending id; a vertex in part ``i`` moves to the
    smallest ``j < i`` where it has no neighbour. Part indices only decrease,
    so the loop terminates. Trailing empty parts are dropped.
    """
    where = check_proper(g, parts)
    k = len(parts)
    # nbr_count[v][j]: neighbours of v in part j
    nbr_count = [[0] * k for _ in range(g.n)]
    for u, v in g.edges.tolist():
        nbr_count[u][where[v]] += 1
        nbr_count[v][where[u]] += 1
    moved = True
    while moved:
        moved = False
        for v in range(g.n):
            i = where[v]
            cnt = nbr_count[v]
            for j in range(i):
                if cnt[j] == 0:
                    where[v] = j
                    for w in g.neighbors(v):
                        nbr_count[w][i] -= 1
                        nbr_count[w][j] += 1
                    moved = True
                    break
    out: list[list[int]] = [[] for _ in range(k)]
    for v in range(g.n):
        out[where[v]].append(v)
    while out and not out[-1]:
        out.pop()
    return NormalizedColouring(tuple(tuple(p) for p in out))


def has_downward_witness(g: Graph, col: NormalizedColouring) -> bool:
    part = col.part_of()
    for v in range(g.n):
        seen = {part[w] for w in g.neighbors(v)}
        if any(j not in seen for j in range(1, part[v])):
            return False
    return True
