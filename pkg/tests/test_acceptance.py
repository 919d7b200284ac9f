"""Acceptance criteria 1-11, run exactly and reported one line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import brute_force_classes, min_mask  # noqa: E402

from mult123.colouring import chromatic_number  # noqa: E402
from mult123.constructive import (  # noqa: E402
    label_bipartite_two,
    label_complete,
    label_four_chromatic,
    label_generic,
    label_subcubic_two,
    label_total,
)
from mult123.corpus import (  # noqa: E402
    CONNECTED_COUNTS,
    connected_graphs,
    cubic_graphs,
    gnp,
    random_connected_bipartite,
    random_subcubic,
)
from mult123.graph import (  # noqa: E402
    Graph,
    complete_graph,
    complete_multipartite,
    is_bipartite,
    is_nice,
    is_regular,
    parse_graph6,
    to_graph6,
)
from mult123.labelling import (  # noqa: E402
    Requirement,
    conflicts,
    is_m_proper,
    is_p_proper,
    is_total_p_proper,
    product_keys,
    satisfies,
)
from mult123.labelling import EdgeLabelling  # noqa: E402
from mult123.oracle import chi_m, chi_p, forest_two_labelling, verify_regular_via_multiset  # noqa: E402

SEED = 123123
_corpus_cache: dict[tuple, list[Graph]] = {}


def corpus(n: int, max_degree=None) -> list[Graph]:
    key = (n, max_degree)
    if key not in _corpus_cache:
        _corpus_cache[key] = connected_graphs(n, max_degree=max_degree)
    return _corpus_cache[key]


def upto(max_n: int, max_degree=None):
    for n in range(1, max_n + 1):
        yield from corpus(n, max_degree)


def _bigint_distinct(g: Graph, labels) -> bool:
    prod = [1] * g.n
    for (u, v), x in zip(g.edge_list(), labels):
        prod[u] *= x
        prod[v] *= x
    return all(prod[u] != prod[v] for u, v in g.edge_list())


# ---------------------------------------------------------------------------


def criterion_1():
    for n in range(1, 7):
        classes = brute_force_classes(n)
        ours = {min_mask(g) for g in corpus(n)}
        if len(classes) != CONNECTED_COUNTS[n] or ours != classes:
            return False, f"enumerator disagrees with brute force at n={n}"
    if len(corpus(7)) != CONNECTED_COUNTS[7]:
        return False, "n=7 count mismatch"
    checked = worst = 0
    for g in upto(7):
        if not is_nice(g):
            continue
        r = chi_p(g)
        w = r.witness.labelling
        if r.value > 3 or not is_p_proper(g, w) or not _bigint_distinct(g, w.labels.tolist()):
            return False, f"{to_graph6(g).decode()} has chi_p={r.value}"
        worst = max(worst, r.value)
        checked += 1
    return True, f"{checked} nice graphs, max chi_p = {worst}, witnesses rechecked"


def criterion_2():
    checked = worst = 0
    for g in upto(7):
        if not is_nice(g):
            continue
        r = chi_m(g)
        if r.value > 3 or not is_m_proper(g, r.witness.labelling):
            return False, f"{to_graph6(g).decode()} has chi_m={r.value}"
        worst = max(worst, r.value)
        checked += 1
    return True, f"{checked} nice graphs, max chi_m = {worst}"


def criterion_3():
    count = 0
    for g in upto(8):
        if g.n < 4 or chromatic_number(g) != 4:
            continue
        lab, trace = label_four_chromatic(g)
        if not is_p_proper(g, lab):
            return False, f"{to_graph6(g).decode()} not p-proper"
        if trace.failed_milestones:
            return False, f"{to_graph6(g).decode()} milestone {trace.failed_milestones[0].name}"
        count += 1
    return True, f"{count} four-chromatic graphs, all milestones held"


def _random_high_chromatic(rng, want=50):
    out = []
    while len(out) < want:
        g = gnp(int(rng.integers(6, 15)), float(rng.uniform(0.55, 0.95)), rng)
        if chromatic_number(g) >= 5:
            out.append(g)
    return out


def criterion_4():
    rng = np.random.default_rng(SEED)
    extra = [complete_graph(n) for n in range(5, 10)] + [complete_multipartite(2, 2, 2, 2, 2)]
    family = list(upto(7)) + extra + _random_high_chromatic(rng)
    anomalies = 0
    for g in family:
        lab, trace = label_generic(g)
        anomalies += len(trace.anomalies)
        if not satisfies(g, lab, Requirement.S1_MATCHING):
            return False, f"{to_graph6(g).decode()} ends non-conforming"
    return True, f"{len(family)} graphs conform, {anomalies} repair activations"


def criterion_5():
    count = 0
    for g in upto(7):
        tl, _ = label_total(g)
        if not is_total_p_proper(g, tl):
            return False, f"{to_graph6(g).decode()} not total-p-proper"
        if not set(tl.edges.labels.tolist()) <= {1, 2, 3} or not set(tl.vertex_labels.tolist()) <= {1, 2}:
            return False, f"{to_graph6(g).decode()} uses labels out of range"
        count += 1
    return True, f"{count} graphs total-p-proper"


def criterion_6():
    count = 0
    for g in upto(6):
        if not forest_two_labelling(g).found:
            return False, f"{to_graph6(g).decode()} has no forest 2-labelling"
        count += 1
    return True, f"{count} graphs have a forest 2-labelling"


def criterion_7():
    t0 = time.monotonic()
    for n in range(2, 501):
        lab, _ = label_complete(n)
        if not satisfies(lab.graph, lab, Requirement.ONE_EDGE):
            return False, f"K_{n} fails one-edge"
    secs = time.monotonic() - t0
    return secs < 30, f"K_2..K_500 one-edge in {secs:.1f} s"


def _bipartite_ok(g, root):
    lab, _ = label_bipartite_two(g, root)
    if not satisfies(g, lab, Requirement.ONE_STAR):
        return False
    return all(root in e for e in conflicts(g, lab).conflicts)


def criterion_8():
    t0 = time.monotonic()
    small = [g for g in upto(8) if g.n >= 2 and is_bipartite(g)]
    for g in small:
        for root in range(g.n):
            if not _bipartite_ok(g, root):
                return False, f"{to_graph6(g).decode()} root {root}"
    rng = np.random.default_rng(SEED)
    for _ in range(100):
        g = random_connected_bipartite(int(rng.integers(2, 10_001)), rng)
        root = int(rng.integers(0, g.n))
        if not _bipartite_ok(g, root):
            return False, f"random bipartite n={g.n} root {root}"
    secs = time.monotonic() - t0
    return secs < 120, f"{len(small)} corpus graphs (every root) + 100 random in {secs:.1f} s"


def criterion_9():
    family = [g for g in upto(8, max_degree=3) if g.n >= 2]
    family += [g for n in (4, 6, 8, 10) for g in cubic_graphs(n)]
    rng = np.random.default_rng(SEED)
    family += [random_subcubic(int(rng.integers(2, 1001)), rng) for _ in range(100)]
    for g in family:
        lab, _ = label_subcubic_two(g)
        if not satisfies(g, lab, Requirement.ALL_FORESTS):
            return False, f"{to_graph6(g).decode()} has a cyclic class"
    return True, f"{len(family)} subcubic graphs, every class a forest"


def criterion_10():
    count = 0
    for g in upto(8):
        if not (is_regular(g) and is_nice(g)):
            continue
        chk = verify_regular_via_multiset(g)
        if not chk.holds:
            return False, f"{to_graph6(g).decode()}: {chk.anomaly or 'm-proper witness not p-proper'}"
        count += 1
    return True, f"{count} nice regular graphs"


def _sample(rng):
    if rng.random() < 0.1:
        # large degrees, so products exceed 64-bit range
        n = int(rng.integers(20, 70))
        p = 0.8
    else:
        n = int(rng.integers(2, 10))
        p = float(rng.uniform(0.2, 1.0))
    g = gnp(n, p, rng)
    k = int(rng.integers(1, 7))
    return g, EdgeLabelling(g, rng.integers(1, k + 1, size=g.m), k)


def criterion_11():
    for g in upto(7):
        if parse_graph6(to_graph6(g)) != g:
            return False, f"graph6 roundtrip broke on {to_graph6(g).decode()}"
    rng = np.random.default_rng(SEED)
    samples = 10**5
    overflow = 0
    for _ in range(samples):
        g, lab = _sample(rng)
        keys = [tuple(r) for r in product_keys(g, lab).tolist()]
        big = [1] * g.n
        for (u, v), x in zip(g.edge_list(), lab.labels.tolist()):
            big[u] *= x
            big[v] *= x
        overflow += max(big) >= 2**63
        pairs = set(zip(keys, big))
        if not (len(pairs) == len(set(keys)) == len(set(big))):
            return False, f"exponent/bigint mismatch on {to_graph6(g).decode()}"
        if is_p_proper(g, lab) and not is_m_proper(g, lab):
            return False, f"p-proper but not m-proper on {to_graph6(g).decode()}"
    return True, f"n<=7 roundtrip ok, {samples} samples ({overflow} beyond 64 bits)"


CRITERIA = {
    1: ("product 1-2-3 corroboration, n <= 7", criterion_1),
    2: ("multiset version, chi_m <= 3, n <= 7", criterion_2),
    3: ("4-chromatic construction, n <= 8", criterion_3),
    4: ("S_1 matching construction", criterion_4),
    5: ("total labelling construction, n <= 7", criterion_5),
    6: ("forest 2-labellings, n <= 6", criterion_6),
    7: ("complete graphs, one conflict edge, n <= 500", criterion_7),
    8: ("bipartite graphs, one star at the root", criterion_8),
    9: ("subcubic graphs, forests", criterion_9),
    10: ("nice regular graphs, multiset implies product", criterion_10),
    11: ("infrastructure: graph6 and exponent arithmetic", criterion_11),
}


def _run(num: int) -> tuple[bool, str]:
    name, fn = CRITERIA[num]
    t0 = time.monotonic()
    ok, detail = fn()
    line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail} [{time.monotonic() - t0:.1f} s]"
    return ok, line


@pytest.mark.slow
@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    ok, line = _run(num)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for num in sorted(CRITERIA):
        ok, line = _run(num)
        print(line, flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
