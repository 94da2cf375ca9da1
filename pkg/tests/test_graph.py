import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mstinfer.graph import (
    Edge,
    GraphError,
    NodeSubset,
    WeightedGraph,
    components,
    count_components,
    cut_from_partition,
    degree,
    induced_subgraph,
    strength,
)


def triangle(w=(0.1, 0.2, 0.3)):
    return WeightedGraph(3, ((0, 1, w[0]), (1, 2, w[1]), (0, 2, w[2])))


def two_triangles():
    return WeightedGraph(6, ((0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0), (3, 4, 4.0), (4, 5, 5.0), (3, 5, 6.0)))


def path(n):
    return WeightedGraph(n, tuple((i, i + 1, float(i + 1)) for i in range(n - 1)))


@st.composite
def graphs(draw, max_nodes=9):
    n = draw(st.integers(1, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    ws = draw(st.lists(st.floats(0.01, 10), min_size=len(chosen), max_size=len(chosen)))
    return WeightedGraph(n, tuple(Edge(u, v, w) for (u, v), w in zip(chosen, ws)))


class TestConstruction:
    def test_edges_canonicalised(self):
        g = WeightedGraph(3, ((2, 0, 1.5),))
        assert g.edges == (Edge(0, 2, 1.5),)

    @pytest.mark.parametrize(
        "edges",
        [((0, 0, 1.0),), ((0, 3, 1.0),), ((0, 1, 0.0),), ((0, 1, -1.0),), ((0, 1, float("nan")),),
         ((0, 1, float("inf")),), ((0, 1, 1.0), (1, 0, 2.0))],
    )
    def test_rejects_malformed(self, edges):
        with pytest.raises(GraphError):
            WeightedGraph(3, edges)

    def test_attribute_lengths_checked(self):
        with pytest.raises(GraphError):
            WeightedGraph(2, (), coords=((0.0, 0.0),))

    def test_trusted_matches_validated(self):
        import numpy as np

        g = WeightedGraph._trusted(3, np.array([0, 1]), np.array([1, 2]), np.array([0.5, 0.25]))
        assert g.edges == WeightedGraph(3, ((0, 1, 0.5), (1, 2, 0.25))).edges
        assert g.labels == (0, 1, 2)

    def test_find_edge(self):
        g = triangle()
        assert g.find_edge(2, 1) == 1
        with pytest.raises(GraphError):
            path(3).find_edge(0, 2)


class TestInducedSubgraph:
    def test_triangle_pair(self):
        h = induced_subgraph(triangle(), NodeSubset(frozenset({0, 1})))
        assert h.n_nodes == 2
        assert h.edges == (Edge(0, 1, 0.1),)

    def test_all_nodes_is_identity(self):
        g = two_triangles()
        h = induced_subgraph(g, range(6))
        assert h.edges == g.edges
        assert h.parent_edge == tuple(range(6))

    def test_path_alternate_nodes(self):
        h = induced_subgraph(path(5), {0, 2, 4})
        assert h.n_nodes == 3 and h.n_edges == 0

    def test_labels_track_root_ids(self):
        g = two_triangles()
        h = induced_subgraph(g, {1, 2, 4, 5})
        assert h.labels == (1, 2, 4, 5)
        assert set(h.edge_keys) == {(1, 2), (4, 5)}
        hh = induced_subgraph(h, {1, 3})
        assert hh.labels == (2, 5) and hh.n_edges == 0

    def test_unknown_node(self):
        with pytest.raises(GraphError):
            induced_subgraph(triangle(), {0, 7})

    @given(graphs(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_edges_are_exactly_those_inside(self, g, data):
        s = data.draw(st.sets(st.integers(0, g.n_nodes - 1)))
        h = induced_subgraph(g, s)
        expected = {(g.labels[u], g.labels[v], w) for u, v, w in g.edges if u in s and v in s}
        got = {(h.labels[u], h.labels[v], w) for u, v, w in h.edges}
        assert got == expected
        for j, i in enumerate(h.parent_edge):
            assert g.key(i) == h.key(j)


class TestComponents:
    def test_connected(self):
        assert components(triangle()) == [[0, 1, 2]]

    def test_edgeless(self):
        assert components(WeightedGraph(4, ())) == [[0], [1], [2], [3]]

    def test_two_triangles(self):
        assert components(two_triangles()) == [[0, 1, 2], [3, 4, 5]]
        assert count_components(two_triangles()) == 2

    @given(graphs())
    @settings(max_examples=60, deadline=None)
    def test_partition(self, g):
        blocks = components(g)
        assert sorted(v for b in blocks for v in b) == list(range(g.n_nodes))
        where = {v: k for k, b in enumerate(blocks) for v in b}
        assert all(where[u] == where[v] for u, v, _ in g.edges)


class TestStrengthDegree:
    def test_isolated(self):
        g = WeightedGraph(3, ((0, 1, 1.0),))
        assert strength(g, 2) == 0 and degree(g, 2) == 0

    def test_triangle_strength(self):
        g = triangle((0.2, 0.7, 0.3))
        assert strength(g, 0) == pytest.approx(0.5)

    def test_k4(self):
        g = WeightedGraph(4, tuple((u, v, 1.0) for u in range(4) for v in range(u + 1, 4)))
        assert [strength(g, v) for v in range(4)] == [3.0] * 4
        assert degree(g, 2) == 3

    def test_star_hub(self):
        g = WeightedGraph(7, tuple((0, k, 1.0) for k in range(1, 7)))
        assert degree(g, 0) == 6

    def test_unknown_node(self):
        with pytest.raises(GraphError):
            strength(triangle(), 3)


class TestCut:
    def test_k3(self):
        g = triangle()
        cut = cut_from_partition(g, {0})
        assert {g.edges[i][:2] for i in cut.crossing_edges} == {(0, 1), (0, 2)}

    def test_path(self):
        g = path(4)
        cut = cut_from_partition(g, {0, 1})
        assert {g.edges[i][:2] for i in cut.crossing_edges} == {(1, 2)}
        assert cut.side_b == frozenset({2, 3})

    def test_disjoint_triangles(self):
        assert cut_from_partition(two_triangles(), {0, 1, 2}).crossing_edges == frozenset()

    @pytest.mark.parametrize("side", [set(), {0, 1, 2}])
    def test_invalid_partition(self, side):
        with pytest.raises(GraphError):
            cut_from_partition(triangle(), side)


def test_node_subset_order_must_match():
    with pytest.raises(GraphError):
        NodeSubset(frozenset({1, 2}), (1,))
    with pytest.raises(GraphError):
        NodeSubset.from_order([1, 1])
