import itertools

import networkx as nx
import pytest

from mult123.colouring import (
    NormalizedColouring,
    check_proper,
    chromatic_number,
    has_downward_witness,
    is_k_colourable,
    normalize_colouring,
    optimal_colouring,
)
from mult123.corpus import connected_graphs
from mult123.errors import ColouringError
from mult123.graph import (
    complete_graph,
    complete_multipartite,
    cycle_graph,
    empty_graph,
    path_graph,
    petersen_graph,
)


def brute_chi(g) -> int:
    for k in range(1, g.n + 1):
        for colour in itertools.product(range(k), repeat=g.n):
            if all(colour[u] != colour[v] for u, v in g.edge_list()):
                return k
    return 0


@pytest.mark.parametrize("g,chi", [
    (complete_graph(4), 4),
    (cycle_graph(5), 3),
    (petersen_graph(), 3),
    (empty_graph(3), 1),
    (complete_multipartite(2, 2, 2, 2, 2), 5),
])
def test_chromatic_number(g, chi):
    assert chromatic_number(g) == chi


def test_petersen_not_bipartite():
    assert not is_k_colourable(petersen_graph(), 2)
    assert is_k_colourable(petersen_graph(), 3)


def test_matches_brute_force_on_small_corpus():
    for n in range(1, 7):
        for g in connected_graphs(n):
            assert chromatic_number(g) == brute_chi(g), g


def test_optimal_colouring_shapes():
    assert sorted(map(sorted, optimal_colouring(complete_graph(3)))) == [[0], [1], [2]]
    parts = optimal_colouring(path_graph(3))
    assert sorted(map(sorted, parts)) == [[0, 2], [1]]
    sizes = sorted(len(p) for p in optimal_colouring(cycle_graph(5)))
    assert sizes == [1, 2, 2]


def test_optimal_colouring_is_proper_and_optimal(rng):
    for _ in range(30):
        g = nx.gnp_random_graph(int(rng.integers(4, 12)), 0.5, seed=int(rng.integers(1 << 30)))
        from mult123.graph import Graph
        h = Graph(g.number_of_nodes(), list(g.edges()))
        parts = optimal_colouring(h)
        check_proper(h, parts)
        greedy = 1 + max(nx.greedy_color(g).values(), default=-1)
        assert len(parts) <= max(greedy, 1)


def test_check_proper_names_edge():
    with pytest.raises(ColouringError) as exc:
        check_proper(path_graph(3), [[0, 1], [2]])
    assert exc.value.edge == (0, 1)


def test_normalize_moves_down():
    # a-b-c-d as a 4-cycle, parts ({a},{b,d},{c})
    col = normalize_colouring(cycle_graph(4), [[0], [1, 3], [2]])
    assert col.parts == ((0, 2), (1, 3))


def test_normalize_complete_unchanged():
    col = normalize_colouring(complete_graph(4), [[2], [0], [3], [1]])
    assert col.parts == ((2,), (0,), (3,), (1,))


def test_normalize_fixpoint():
    g = petersen_graph()
    once = normalize_colouring(g, optimal_colouring(g))
    assert has_downward_witness(g, once)
    assert normalize_colouring(g, once.parts) == once


def test_part_of_is_one_based():
    col = NormalizedColouring(((0, 2), (1,)))
    assert col.part_of() == [1, 2, 1] and col.k == 2


def test_normalize_rejects_improper():
    with pytest.raises(ColouringError):
        normalize_colouring(complete_graph(3), [[0, 1], [2]])
