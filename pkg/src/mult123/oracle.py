"""Backtracking ground truth: existence of constrained k-labellings and chi_P / chi_M / chi_S."""

from __future__ import annotations

import enum
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import BudgetExceeded, PreconditionError
from .graph import Graph, is_nice, is_regular
from .labelling import EdgeLabelling, Requirement, exponent_table, is_p_proper, satisfies

DEFAULT_MAX_NODES = 10**8
DEFAULT_MAX_SECONDS = 120.0
CHUNK = 1 << 20

P_PROPER = Requirement.ALL_INDEPENDENT
M_PROPER = Requirement.M_PROPER
S_PROPER = Requirement.S_PROPER
ALL_FORESTS = Requirement.ALL_FORESTS
S1_MATCHING = Requirement.S1_MATCHING

_MODES = {
    P_PROPER: K.MODE_P,
    M_PROPER: K.MODE_M,
    S_PROPER: K.MODE_S,
    ALL_FORESTS: K.MODE_FOREST,
    S1_MATCHING: K.MODE_S1_MATCHING,
}


class Outcome(str, enum.Enum):
    WITNESS = "witness"
    EXHAUSTED = "exhausted"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class SearchResult:
    outcome: Outcome
    labelling: EdgeLabelling | None
    nodes: int
    seconds: float
    k: int
    predicate: Requirement

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.WITNESS


@dataclass(frozen=True)
class ChiResult:
    """``value`` is ``None`` when undefined (a ``K_2`` component)."""

    value: int | None
    predicate: Requirement
    witness: SearchResult | None = None
    lower: SearchResult | None = None  # exhausted search at value - 1
    searches: tuple[SearchResult, ...] = field(default=())

    @property
    def defined(self) -> bool:
        return self.value is not None

    @property
    def nodes(self) -> int:
        return sum(s.nodes for s in self.searches)


@dataclass(frozen=True)
class RegularCheck:
    holds: bool
    witness: EdgeLabelling | None
    search: SearchResult
    anomaly: str = ""


def bfs_edge_order(g: Graph) -> np.ndarray:
    """Edges grouped by the BFS position of their later endpoint."""
    pos = [-1] * g.n
    order: list[int] = []
    for s in range(g.n):
        if pos[s] >= 0:
            continue
        pos[s] = len(order)
        order.append(s)
        q = deque([s])
        while q:
            x = q.popleft()
            for y in g.neighbors(x):
                if pos[y] < 0:
                    pos[y] = len(order)
                    order.append(y)
                    q.append(y)
    out = []
    for x in order:
        for y in g.neighbors(x):
            if pos[y] < pos[x]:
                out.append(g.edge_index(x, y))
    return np.asarray(out, dtype=np.int64)


def run_search(g: Graph, k: int, predicate, *, fixed=None, order=None,
               max_nodes: int = DEFAULT_MAX_NODES, max_seconds: float | None = DEFAULT_MAX_SECONDS,
               raise_on_budget: bool = True) -> SearchResult:
    """Depth-first search over k-labellings of ``g``.

    ``fixed`` (aligned with ``g.edges``, 0 = free) pins labels; ``order`` is a
    permutation of edge rows giving the assignment order.
    """
    pred = Requirement.parse(predicate)
    if pred not in _MODES:
        raise ValueError(f"no search mode for {pred.value}")
    if k < 1:
        raise ValueError("k must be at least 1")
    t0 = time.monotonic()
    m = g.m
    if m == 0:
        lab = EdgeLabelling(g, [], k)
        return SearchResult(Outcome.WITNESS, lab, 0, 0.0, k, pred)
    perm = bfs_edge_order(g) if order is None else np.asarray(order, dtype=np.int64)
    eu = np.ascontiguousarray(g.edges[perm, 0])
    ev = np.ascontiguousarray(g.edges[perm, 1])
    complete_at = np.full(g.n, -1, dtype=np.int64)
    np.maximum.at(complete_at, eu, np.arange(m))
    np.maximum.at(complete_at, ev, np.arange(m))
    indptr, indices = g.csr()
    pexp = np.ascontiguousarray(exponent_table(k))
    fx = np.zeros(m, dtype=np.int64) if fixed is None else np.asarray(fixed, dtype=np.int64)[perm].copy()
    labels = np.zeros(m, dtype=np.int64)
    cnt = np.zeros((g.n, k + 1), dtype=np.int64)
    pkey = np.zeros((g.n, pexp.shape[1]), dtype=np.int64)
    ssum = np.zeros(g.n, dtype=np.int64)
    parent = np.arange(g.n, dtype=np.int64)
    rank = np.zeros(g.n, dtype=np.int64)
    s1deg = np.zeros(g.n, dtype=np.int64)
    cap = 8 * m + 8
    log_kind = np.zeros(cap, dtype=np.int64)
    log_a = np.zeros(cap, dtype=np.int64)
    log_start = np.zeros(m, dtype=np.int64)
    st = np.zeros(2, dtype=np.int64)
    mode = _MODES[pred]
    nodes = 0
    while True:
        chunk = min(CHUNK, max_nodes - nodes)
        outcome, used = K.labelling_search(eu, ev, complete_at, indptr, indices, k, mode, pexp, fx,
                                           labels, cnt, pkey, ssum, parent, rank, s1deg,
                                           log_kind, log_a, log_start, st, chunk)
        nodes += int(used)
        elapsed = time.monotonic() - t0
        if outcome == K.FOUND:
            out = np.zeros(m, dtype=np.int64)
            out[perm] = labels
            lab = EdgeLabelling(g, out, k)
            if not satisfies(g, lab, pred):
                raise AssertionError(f"search produced a labelling failing {pred.value}")
            return SearchResult(Outcome.WITNESS, lab, nodes, elapsed, k, pred)
        if outcome == K.EXHAUSTED:
            return SearchResult(Outcome.EXHAUSTED, None, nodes, elapsed, k, pred)
        if nodes >= max_nodes or (max_seconds is not None and elapsed > max_seconds):
            if raise_on_budget:
                raise BudgetExceeded(
                    f"search budget exhausted ({nodes} nodes, {elapsed:.1f} s) for k={k}, {pred.value}",
                    nodes=nodes, seconds=elapsed)
            return SearchResult(Outcome.UNDEFINED, None, nodes, elapsed, k, pred)


def find_k_labelling(g: Graph, k: int, predicate=P_PROPER, max_nodes: int = DEFAULT_MAX_NODES,
                     max_seconds: float | None = DEFAULT_MAX_SECONDS) -> SearchResult:
    """Witness k-labelling satisfying ``predicate``, or proof by exhaustion that none exists.

    Proper-type predicates on graphs with a ``K_2`` component are reported as
    undefined without searching.
    """
    pred = Requirement.parse(predicate)
    if pred in (P_PROPER, M_PROPER, S_PROPER) and not is_nice(g):
        return SearchResult(Outcome.UNDEFINED, None, 0, 0.0, k, pred)
    return run_search(g, k, pred, max_nodes=max_nodes, max_seconds=max_seconds)


def _chi(g: Graph, pred: Requirement, max_k: int, max_nodes: int, max_seconds) -> ChiResult:
    if not is_nice(g):
        return ChiResult(None, pred)
    searches = []
    for k in range(1, max_k + 1):
        res = find_k_labelling(g, k, pred, max_nodes=max_nodes, max_seconds=max_seconds)
        searches.append(res)
        if res.found:
            lower = searches[-2] if len(searches) > 1 else None
            return ChiResult(k, pred, res, lower, tuple(searches))
    raise BudgetExceeded(f"no {pred.value} labelling with at most {max_k} labels")


def chi_p(g: Graph, max_k: int = 6, max_nodes: int = DEFAULT_MAX_NODES,
          max_seconds: float | None = DEFAULT_MAX_SECONDS) -> ChiResult:
    return _chi(g, P_PROPER, max_k, max_nodes, max_seconds)


def chi_m(g: Graph, max_k: int = 6, max_nodes: int = DEFAULT_MAX_NODES,
          max_seconds: float | None = DEFAULT_MAX_SECONDS) -> ChiResult:
    return _chi(g, M_PROPER, max_k, max_nodes, max_seconds)


def chi_s(g: Graph, max_k: int = 6, max_nodes: int = DEFAULT_MAX_NODES,
          max_seconds: float | None = DEFAULT_MAX_SECONDS) -> ChiResult:
    return _chi(g, S_PROPER, max_k, max_nodes, max_seconds)


def forest_two_labelling(g: Graph, max_nodes: int = DEFAULT_MAX_NODES,
                         max_seconds: float | None = DEFAULT_MAX_SECONDS) -> SearchResult:
    """2-labelling under which every product class induces a forest (exhausted = counterexample)."""
    return run_search(g, 2, ALL_FORESTS, max_nodes=max_nodes, max_seconds=max_seconds)


def verify_regular_via_multiset(g: Graph, max_nodes: int = DEFAULT_MAX_NODES,
                                max_seconds: float | None = DEFAULT_MAX_SECONDS) -> RegularCheck:
    """Search an m-proper 3-labelling of a nice regular graph and confirm it is p-proper.

    With equal degrees, equal ``(d_2, d_3)`` forces equal ``d_1`` as well, so
    any m-proper labelling must already be p-proper.
    """
    if not is_regular(g):
        raise PreconditionError("graph is not regular")
    if not is_nice(g):
        raise PreconditionError("graph has a K_2 component")
    res = run_search(g, 3, M_PROPER, max_nodes=max_nodes, max_seconds=max_seconds)
    if not res.found:
        return RegularCheck(False, None, res, "no m-proper 3-labelling found")
    return RegularCheck(is_p_proper(g, res.labelling), res.labelling, res)
