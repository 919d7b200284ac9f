import pickle
import warnings

import numpy as np
import pytest
from conftest import g6_reference

from mult123.errors import (
    DisconnectedGraphError,
    DuplicateEdgeWarning,
    EdgeListError,
    Graph6Error,
    GraphError,
    NotBipartiteError,
)
from mult123.graph import (
    Graph,
    _n_to_bytes,
    bfs_layers,
    bipartition,
    complete_graph,
    complete_multipartite,
    connected_components,
    cycle_graph,
    disjoint_union,
    empty_graph,
    induced_subgraph,
    is_bipartite,
    is_complete,
    is_connected,
    is_nice,
    is_regular,
    iter_graph6,
    parse_edge_list,
    parse_graph6,
    path_graph,
    petersen_graph,
    star_graph,
    to_edge_list,
    to_graph6,
)


class TestGraph:
    def test_edges_are_normalised(self):
        g = Graph(4, [(3, 1), (0, 2)])
        assert g.edge_list() == [(0, 2), (1, 3)]
        assert g.m == 2
        with pytest.raises(GraphError, match="parallel"):
            Graph(4, [(3, 1), (1, 3)])

    def test_rejects_loops_and_out_of_range(self):
        with pytest.raises(GraphError):
            Graph(3, [(1, 1)])
        with pytest.raises(GraphError):
            Graph(3, [(0, 3)])

    def test_degrees_and_neighbours(self):
        g = star_graph(3)
        assert g.degrees.tolist() == [3, 1, 1, 1]
        assert g.max_degree == 3 and g.min_degree == 1
        assert g.neighbors(0) == (1, 2, 3)
        assert g.has_edge(2, 0) and not g.has_edge(1, 2)

    def test_edge_index_matches_rows(self):
        g = petersen_graph()
        for i, (u, v) in enumerate(g.edge_list()):
            assert g.edge_index(v, u) == i

    def test_csr_and_matrix_agree(self):
        g = cycle_graph(5)
        indptr, indices = g.csr()
        mat = g.adjacency_matrix()
        for v in range(5):
            assert sorted(indices[indptr[v]:indptr[v + 1]].tolist()) == np.nonzero(mat[v])[0].tolist()

    def test_value_semantics(self):
        a = Graph(3, [(0, 1), (1, 2)])
        b = Graph(3, [(2, 1), (1, 0)])
        assert a == b and hash(a) == hash(b)
        assert pickle.loads(pickle.dumps(a)) == a
        assert a != path_graph(4)

    def test_edges_read_only(self):
        g = path_graph(3)
        with pytest.raises(ValueError):
            g.edges[0, 0] = 2

    def test_from_labelled_edges_compacts_ids(self):
        g, names = Graph.from_labelled_edges([("x", "y"), ("y", "z")])
        assert g == path_graph(3)
        assert names == ["x", "y", "z"]

    def test_named_graphs(self):
        assert complete_graph(5).m == 10
        assert petersen_graph().m == 15 and is_regular(petersen_graph())
        assert complete_multipartite(2, 2, 2).m == 12
        assert disjoint_union(complete_graph(3), path_graph(2)).n == 5


class TestGraph6:
    @pytest.mark.parametrize("text,n,edges", [
        ("@", 1, []),
        ("A_", 2, [(0, 1)]),
        ("Bw", 3, [(0, 1), (0, 2), (1, 2)]),
        ("Bg", 3, [(0, 1), (1, 2)]),
        ("D??", 5, []),
    ])
    def test_known_strings(self, text, n, edges):
        g = parse_graph6(text)
        assert g.n == n and g.edge_list() == edges
        assert to_graph6(g) == text.encode()
        assert g6_reference(n, edges) == text.encode()

    def test_encode_k1_k3_empty5(self):
        assert to_graph6(complete_graph(1)) == b"@"
        assert to_graph6(complete_graph(3)) == b"Bw"
        assert to_graph6(empty_graph(5)) == b"D??"

    @pytest.mark.parametrize("n", [0, 1, 7, 62, 63, 100, 300])
    def test_matches_reference_encoder(self, n, rng):
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.1])
        enc = to_graph6(g)
        assert enc == g6_reference(n, g.edge_list())
        assert parse_graph6(enc) == g

    def test_length_forms(self):
        assert to_graph6(empty_graph(62))[:1] == bytes([62 + 63])
        four = to_graph6(empty_graph(63))
        assert four[:1] == b"~" and four[1:2] != b"~"
        assert parse_graph6(four).n == 63
        # the 8-byte form: header only, the body would be far too large
        head = _n_to_bytes(258048)
        assert head == b"~~" + bytes(63 + ((258048 >> s) & 63) for s in (30, 24, 18, 12, 6, 0))
        assert _n_to_bytes(258047)[:2] != b"~~"

    def test_header_is_accepted(self):
        assert parse_graph6(b">>graph6<<Bw") == complete_graph(3)
        assert to_graph6(complete_graph(3), header=True) == b">>graph6<<Bw"

    def test_bad_byte_reports_offset(self):
        with pytest.raises(Graph6Error) as exc:
            parse_graph6("Bw!")
        assert exc.value.offset == 2

    def test_trailing_bits_nonzero(self):
        # n=3 uses 3 of the 6 bits; 'x' = 63+57 sets a padding bit
        with pytest.raises(Graph6Error, match="padding"):
            parse_graph6("Bx")

    def test_wrong_length(self):
        with pytest.raises(Graph6Error):
            parse_graph6("C")
        with pytest.raises(Graph6Error):
            parse_graph6("Bww")

    def test_malformed_length_prefix(self):
        with pytest.raises(Graph6Error):
            parse_graph6("~??")
        with pytest.raises(Graph6Error, match="non-canonical"):
            parse_graph6("~???")

    def test_iter_skips_blank_and_reports_errors(self):
        out = list(iter_graph6(["Bw", "", "B!", "A_"]))
        assert [i for i, _ in out] == [1, 3, 4]
        assert isinstance(out[1][1], Graph6Error)
        assert out[2][1] == complete_graph(2)


class TestEdgeList:
    def test_path(self):
        assert parse_edge_list("0 1\n1 2") == path_graph(3)

    def test_declared_order(self):
        g = parse_edge_list("n 4\n0 1")
        assert g.n == 4 and g.m == 1
        assert connected_components(g) == [[0, 1], [2], [3]]

    def test_self_loop(self):
        with pytest.raises(EdgeListError, match="self-loop"):
            parse_edge_list("0 0")

    def test_non_integer(self):
        with pytest.raises(EdgeListError) as exc:
            parse_edge_list("0 1\n1 x")
        assert exc.value.line == 2

    def test_comments_and_duplicates(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            g = parse_edge_list("# a triangle\n0 1\n1 2 # inline\n2 0\n1 0\n")
        assert g == complete_graph(3)
        assert any(issubclass(w.category, DuplicateEdgeWarning) for w in caught)

    def test_declared_too_small(self):
        with pytest.raises(EdgeListError):
            parse_edge_list("n 2\n0 5")

    def test_roundtrip(self):
        g = petersen_graph()
        assert parse_edge_list(to_edge_list(g)) == g


class TestStructure:
    def test_layers_path(self):
        assert bfs_layers(path_graph(4), 0).layers == ((0,), (1,), (2,), (3,))

    def test_layers_star(self):
        lay = bfs_layers(star_graph(3), 0)
        assert lay.layers == ((0,), (1, 2, 3))
        assert lay.depth == 1

    def test_layers_cycle(self):
        assert bfs_layers(cycle_graph(4), 0).layers == ((0,), (1, 3), (2,))

    def test_layers_disconnected(self):
        with pytest.raises(DisconnectedGraphError) as exc:
            bfs_layers(disjoint_union(path_graph(2), path_graph(2)), 0)
        assert sorted(exc.value.unreached) == [2, 3]

    @pytest.mark.parametrize("g,nice", [
        (complete_graph(2), False),
        (complete_graph(3), True),
        (disjoint_union(complete_graph(3), complete_graph(2)), False),
        (empty_graph(3), True),
    ])
    def test_is_nice(self, g, nice):
        assert is_nice(g) is nice

    def test_induced_subgraph(self):
        sub, mapping = induced_subgraph(complete_graph(3), [0, 1])
        assert sub == complete_graph(2) and mapping == [0, 1]
        sub, _ = induced_subgraph(cycle_graph(5), [])
        assert sub.n == 0
        sub, mapping = induced_subgraph(cycle_graph(4), [0, 2])
        assert sub.m == 0 and mapping == [0, 2]

    def test_bipartition(self):
        side = bipartition(cycle_graph(6))
        assert all(side[u] != side[v] for u, v in cycle_graph(6).edge_list())
        assert is_bipartite(path_graph(5))

    def test_odd_cycle_witness(self):
        g = petersen_graph()
        with pytest.raises(NotBipartiteError) as exc:
            bipartition(g)
        cyc = exc.value.odd_cycle
        assert len(cyc) % 2 == 1
        assert all(g.has_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))

    def test_connectivity_predicates(self):
        assert is_connected(petersen_graph())
        assert not is_connected(empty_graph(2))
        assert is_complete(complete_graph(4)) and not is_complete(cycle_graph(4))
