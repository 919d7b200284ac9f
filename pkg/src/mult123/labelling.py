"""Edge labellings, product/multiset/sum semantics and shape checkers.

Vertex products are never formed as machine integers: a vertex's product is
kept as the exponent vector of its prime factorisation (for labels ``1..3``
that is the pair ``(d_2, d_3)``). Integers are only materialised, with
arbitrary precision, for reports.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _sparse_components

from .errors import LabellingError
from .graph import Graph


@lru_cache(maxsize=None)
def primes_upto(k: int) -> tuple[int, ...]:
    return tuple(p for p in range(2, k + 1) if all(p % q for q in range(2, int(p**0.5) + 1)))


@lru_cache(maxsize=None)
def exponent_table(k: int) -> np.ndarray:
    """``table[label, j]`` = exponent of the ``j``-th prime <= k in ``label``.

    Always has at least one column so that ``k = 1`` still yields a 2-D array.
    """
    primes = primes_upto(k) or (2,)
    table = np.zeros((k + 1, len(primes)), dtype=np.int64)
    for lab in range(1, k + 1):
        x = lab
        for j, p in enumerate(primes):
            while x % p == 0:
                table[lab, j] += 1
                x //= p
    table.setflags(write=False)
    return table


# ---------------------------------------------------------------------------
# data model


class EdgeLabelling:
    """Total map ``edge -> {1..k}`` stored as an array aligned with ``graph.edges``."""

    __slots__ = ("graph", "labels", "k")

    def __init__(self, graph: Graph, labels, k: int):
        arr = np.array(labels, dtype=np.int64).reshape(-1)
        if len(arr) != graph.m:
            raise LabellingError(f"labelling has {len(arr)} labels for {graph.m} edges")
        if k < 1:
            raise LabellingError("k must be at least 1")
        if len(arr) and (arr.min() < 1 or arr.max() > k):
            raise LabellingError(f"labels must lie in 1..{k}")
        arr.setflags(write=False)
        self.graph = graph
        self.labels = arr
        self.k = int(k)

    @classmethod
    def constant(cls, g: Graph, value: int = 1, k: int | None = None) -> "EdgeLabelling":
        return cls(g, np.full(g.m, value, dtype=np.int64), k if k is not None else value)

    @classmethod
    def from_mapping(cls, g: Graph, mapping: Mapping[tuple[int, int], int], k: int) -> "EdgeLabelling":
        labels = np.zeros(g.m, dtype=np.int64)
        for (u, v), lab in mapping.items():
            try:
                i = g.edge_index(u, v)
            except KeyError:
                raise LabellingError(f"{u}-{v} is not an edge of the graph") from None
            labels[i] = lab
        if g.m and labels.min() == 0:
            u, v = g.edges[int(np.argmin(labels))]
            raise LabellingError(f"edge {u}-{v} has no label")
        return cls(g, labels, k)

    def label(self, u: int, v: int) -> int:
        return int(self.labels[self.graph.edge_index(u, v)])

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(u, v): lab for (u, v), lab in zip(self.graph.edges.tolist(), self.labels.tolist())}

    def with_labels(self, labels, k: int | None = None) -> "EdgeLabelling":
        return EdgeLabelling(self.graph, labels, self.k if k is None else k)

    def __eq__(self, other):
        if not isinstance(other, EdgeLabelling):
            return NotImplemented
        return self.k == other.k and self.graph == other.graph and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash((self.graph, self.k, self.labels.tobytes()))

    def __repr__(self):
        return f"EdgeLabelling(k={self.k}, m={len(self.labels)})"


@dataclass(frozen=True, eq=False)
class TotalLabelling:
    """Edge labels in ``1..3`` plus vertex labels in ``1..2``."""

    edges: EdgeLabelling
    vertex_labels: np.ndarray

    def __post_init__(self):
        vl = np.array(self.vertex_labels, dtype=np.int64).reshape(-1)
        if len(vl) != self.edges.graph.n:
            raise LabellingError("vertex labelling is not total")
        if len(vl) and (vl.min() < 1 or vl.max() > 2):
            raise LabellingError("vertex labels must lie in 1..2")
        vl.setflags(write=False)
        object.__setattr__(self, "vertex_labels", vl)

    @property
    def graph(self) -> Graph:
        return self.edges.graph


@dataclass(frozen=True)
class VertexSignature:
    """Incident-label counts ``(d_1, ..., d_k)``."""

    counts: tuple[int, ...]

    def d(self, label: int) -> int:
        return self.counts[label - 1] if 1 <= label <= len(self.counts) else 0

    @property
    def degree(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True, order=True)
class ProductClass:
    """Canonical product: exponents over ``primes`` (``(d_2, d_3)`` for ``k = 3``)."""

    exponents: tuple[int, ...]
    primes: tuple[int, ...] = field(default=(2, 3), compare=False)

    @property
    def value(self) -> int:
        out = 1
        for p, e in zip(self.primes, self.exponents):
            out *= p**e
        return out

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)


class Requirement(str, enum.Enum):
    ALL_INDEPENDENT = "p-proper"
    M_PROPER = "m-proper"
    S_PROPER = "s-proper"
    S1_MATCHING = "s1-matching"
    ONE_EDGE = "one-edge"
    ONE_STAR = "one-star"
    ALL_FORESTS = "forests"

    @classmethod
    def parse(cls, text: "str | Requirement") -> "Requirement":
        if isinstance(text, Requirement):
            return text
        aliases = {"all-independent": cls.ALL_INDEPENDENT, "p_proper": cls.ALL_INDEPENDENT, "all-forests": cls.ALL_FORESTS}
        t = text.strip().lower()
        if t in aliases:
            return aliases[t]
        return cls(t)


P_PROPER = Requirement.ALL_INDEPENDENT
SHAPE_REQUIREMENTS = (
    Requirement.ALL_INDEPENDENT,
    Requirement.S1_MATCHING,
    Requirement.ONE_EDGE,
    Requirement.ONE_STAR,
    Requirement.ALL_FORESTS,
)

SHAPE_RANK = {"independent": 0, "edge": 1, "matching": 2, "star": 3, "forest": 4, "cyclic": 5}


@dataclass(frozen=True)
class ClassShape:
    product: ProductClass
    size: int
    edges: int
    shape: str


@dataclass(frozen=True)
class ConflictReport:
    conflicts: tuple[tuple[int, int], ...]
    classes: tuple[ClassShape, ...]  # only classes that induce at least one edge
    worst: str

    @property
    def is_empty(self) -> bool:
        return not self.conflicts


@dataclass(frozen=True)
class ShapeReport:
    requirement: Requirement
    ok: bool
    report: ConflictReport

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# evaluation


def _check(g: Graph, lab: EdgeLabelling):
    if lab.graph is not g and lab.graph != g:
        raise LabellingError("labelling belongs to a different graph")


def signatures(g: Graph, lab: EdgeLabelling) -> np.ndarray:
    """``(n, k + 1)`` array; column ``i`` is ``d_i`` (column 0 unused)."""
    _check(g, lab)
    cnt = np.zeros((g.n, lab.k + 1), dtype=np.int64)
    if g.m:
        np.add.at(cnt, (g.edges[:, 0], lab.labels), 1)
        np.add.at(cnt, (g.edges[:, 1], lab.labels), 1)
    return cnt


def signature(g: Graph, lab: EdgeLabelling, v: int) -> VertexSignature:
    counts = [0] * lab.k
    for w in g.neighbors(v):
        counts[lab.label(v, w) - 1] += 1
    return VertexSignature(tuple(counts))


def product_keys(g: Graph, lab: EdgeLabelling) -> np.ndarray:
    """Per-vertex prime-exponent vectors, shape ``(n, #primes)``."""
    return signatures(g, lab)[:, 1:] @ exponent_table(lab.k)[1:]


def _class(row, k: int) -> ProductClass:
    primes = primes_upto(k) or (2,)
    return ProductClass(tuple(int(x) for x in row), primes)


def product(g: Graph, lab: EdgeLabelling, v: int) -> ProductClass:
    sig = signature(g, lab, v)
    table = exponent_table(lab.k)
    row = np.zeros(table.shape[1], dtype=np.int64)
    for label, c in enumerate(sig.counts, 1):
        row += c * table[label]
    return _class(row, lab.k)


def _conflict_mask(g: Graph, keys: np.ndarray) -> np.ndarray:
    if g.m == 0:
        return np.zeros(0, dtype=bool)
    a = keys[g.edges[:, 0]]
    b = keys[g.edges[:, 1]]
    return np.all(a == b, axis=1) if a.ndim == 2 else a == b


def _shape_report(g: Graph, keys: np.ndarray, k: int) -> tuple[ConflictReport, dict]:
    mask = _conflict_mask(g, keys)
    ce = g.edges[mask]
    conflicts = tuple((int(u), int(v)) for u, v in ce.tolist())
    stats: dict = {}
    if not len(ce):
        return ConflictReport(conflicts, (), "independent"), stats
    uniq, cls = np.unique(keys, axis=0, return_inverse=True)
    cls = cls.reshape(-1)
    ccls = cls[ce[:, 0]]
    nclass = len(uniq)
    e_per = np.bincount(ccls, minlength=nclass)
    degc = np.bincount(ce.ravel(), minlength=g.n)
    touched = np.nonzero(degc)[0]
    t_per = np.bincount(cls[touched], minlength=nclass)
    maxdeg = np.zeros(nclass, dtype=np.int64)
    np.maximum.at(maxdeg, cls[touched], degc[touched])
    adj = coo_matrix((np.ones(len(ce)), (ce[:, 0], ce[:, 1])), shape=(g.n, g.n))
    _, comp = _sparse_components(adj, directed=False)
    pairs = np.unique(np.stack([cls[touched], comp[touched]], axis=1), axis=0)
    c_per = np.bincount(pairs[:, 0], minlength=nclass)
    size = np.bincount(cls, minlength=nclass)
    shapes = []
    for c in np.nonzero(e_per)[0].tolist():
        e, t, comps, md = int(e_per[c]), int(t_per[c]), int(c_per[c]), int(maxdeg[c])
        forest = e == t - comps
        if e == 1:
            shape = "edge"
        elif md <= 1:
            shape = "matching"
        elif forest and comps == 1 and md == e:
            shape = "star"
        elif forest:
            shape = "forest"
        else:
            shape = "cyclic"
        shapes.append(ClassShape(_class(uniq[c], k), int(size[c]), e, shape))
    shapes.sort(key=lambda s: s.product)
    worst = max((s.shape for s in shapes), key=SHAPE_RANK.__getitem__)
    return ConflictReport(conflicts, tuple(shapes), worst), stats


def conflicts(g: Graph, lab: EdgeLabelling) -> ConflictReport:
    """Edges whose ends share a product class, with the shape of every offending class."""
    return _shape_report(g, product_keys(g, lab), lab.k)[0]


def is_p_proper(g: Graph, lab: EdgeLabelling) -> bool:
    return not _conflict_mask(g, product_keys(g, lab)).any()


def is_m_proper(g: Graph, lab: EdgeLabelling) -> bool:
    return not _conflict_mask(g, signatures(g, lab)[:, 1:]).any()


def is_s_proper(g: Graph, lab: EdgeLabelling) -> bool:
    sig = signatures(g, lab)
    sums = sig @ np.arange(lab.k + 1)
    return not _conflict_mask(g, sums).any()


def class_partition(g: Graph, lab: EdgeLabelling) -> dict[ProductClass, tuple[int, ...]]:
    keys = product_keys(g, lab)
    if g.n == 0:
        return {}
    uniq, cls = np.unique(keys, axis=0, return_inverse=True)
    cls = cls.reshape(-1)
    order = np.argsort(cls, kind="stable")
    bounds = np.searchsorted(cls[order], np.arange(len(uniq) + 1))
    return {
        _class(uniq[c], lab.k): tuple(order[bounds[c]:bounds[c + 1]].tolist()) for c in range(len(uniq))
    }


def _verdict(req: Requirement, rep: ConflictReport) -> bool:
    bad = rep.classes
    if req is Requirement.ALL_INDEPENDENT:
        return not bad
    if req is Requirement.ALL_FORESTS:
        return all(s.shape != "cyclic" for s in bad)
    if req is Requirement.S1_MATCHING:
        return all(s.product.value == 1 and s.shape in ("edge", "matching") for s in bad)
    if req is Requirement.ONE_EDGE:
        return len(bad) == 0 or (len(bad) == 1 and bad[0].shape == "edge")
    if req is Requirement.ONE_STAR:
        return len(bad) == 0 or (len(bad) == 1 and bad[0].shape in ("edge", "star"))
    raise ValueError(f"{req.value} is not a shape requirement")


def check_shape(g: Graph, lab: EdgeLabelling, requirement) -> ShapeReport:
    req = Requirement.parse(requirement)
    rep = conflicts(g, lab)
    return ShapeReport(req, _verdict(req, rep), rep)


def satisfies(g: Graph, lab: EdgeLabelling, requirement) -> bool:
    req = Requirement.parse(requirement)
    if req is Requirement.M_PROPER:
        return is_m_proper(g, lab)
    if req is Requirement.S_PROPER:
        return is_s_proper(g, lab)
    if req is Requirement.ALL_INDEPENDENT:
        return is_p_proper(g, lab)
    return check_shape(g, lab, req).ok


def all_verdicts(g: Graph, lab: EdgeLabelling) -> dict[str, bool]:
    rep = conflicts(g, lab)
    out = {r.value: _verdict(r, rep) for r in SHAPE_REQUIREMENTS}
    out[Requirement.M_PROPER.value] = is_m_proper(g, lab)
    out[Requirement.S_PROPER.value] = is_s_proper(g, lab)
    return out


# ---------------------------------------------------------------------------
# total labellings


def total_keys(g: Graph, tl: TotalLabelling) -> np.ndarray:
    keys = product_keys(g, tl.edges)
    table = exponent_table(max(tl.edges.k, 2))
    extra = table[tl.vertex_labels]
    if keys.shape[1] < extra.shape[1]:
        keys = np.pad(keys, ((0, 0), (0, extra.shape[1] - keys.shape[1])))
    keys = keys.copy()
    keys[:, : extra.shape[1]] += extra
    return keys


def total_conflicts(g: Graph, tl: TotalLabelling) -> tuple[tuple[int, int], ...]:
    mask = _conflict_mask(g, total_keys(g, tl))
    return tuple((int(u), int(v)) for u, v in g.edges[mask].tolist())


def is_total_p_proper(g: Graph, tl: TotalLabelling) -> bool:
    return not _conflict_mask(g, total_keys(g, tl)).any()


# ---------------------------------------------------------------------------
# JSON


def labelling_to_json(lab: "EdgeLabelling | TotalLabelling") -> dict:
    if isinstance(lab, TotalLabelling):
        out = labelling_to_json(lab.edges)
        out["vertices"] = [[v, int(x)] for v, x in enumerate(lab.vertex_labels.tolist())]
        return out
    return {
        "k": lab.k,
        "edges": [[u, v, x] for (u, v), x in zip(lab.graph.edges.tolist(), lab.labels.tolist())],
    }


def labelling_from_json(g: Graph, obj: "dict | str") -> "EdgeLabelling | TotalLabelling":
    """Align a JSON labelling with ``g``; raises :class:`LabellingError` unless it is total."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    try:
        k = int(obj["k"])
        triples = obj["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise LabellingError(f"malformed labelling JSON: {exc}") from None
    mapping = {}
    for item in triples:
        if len(item) != 3:
            raise LabellingError(f"edge entry {item!r} is not [u, v, label]")
        u, v, x = (int(t) for t in item)
        key = (min(u, v), max(u, v))
        if key in mapping:
            raise LabellingError(f"edge {key[0]}-{key[1]} labelled twice")
        mapping[key] = x
    if len(mapping) != g.m:
        missing = [tuple(e) for e in g.edges.tolist() if tuple(e) not in mapping]
        if missing:
            raise LabellingError(f"labelling is not total: edge {missing[0][0]}-{missing[0][1]} missing")
    lab = EdgeLabelling.from_mapping(g, mapping, k)
    if obj.get("vertices") is None:
        return lab
    vl = np.zeros(g.n, dtype=np.int64)
    for v, x in obj["vertices"]:
        if not 0 <= int(v) < g.n:
            raise LabellingError(f"vertex {v} out of range")
        vl[int(v)] = int(x)
    if g.n and vl.min() == 0:
        raise LabellingError(f"vertex {int(np.argmin(vl))} has no label")
    return TotalLabelling(lab, vl)


def iter_edges_with_labels(lab: EdgeLabelling) -> Iterable[tuple[int, int, int]]:
    for (u, v), x in zip(lab.graph.edges.tolist(), lab.labels.tolist()):
        yield u, v, x
