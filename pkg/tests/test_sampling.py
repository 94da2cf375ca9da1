import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from mstinfer.generators import GeneratorConfig, GraphKind, generate
from mstinfer.graph import WeightedGraph
from mstinfer.sampling import (
    SampleDesign,
    SampleKind,
    SamplingError,
    closeness_weights,
    far_weights,
    in_quadrants,
    near_weights,
    sample,
    weighted_draw_without_replacement,
)


def within_3_sigma(count, trials, p):
    return abs(count - trials * p) < 3 * math.sqrt(trials * p * (1 - p))


def design(kind, n=0, **kw):
    return SampleDesign(SampleKind(kind), n=n, **kw)


K10 = generate(GeneratorConfig(GraphKind.COMPLETE, 10, seed=1))


class TestUniform:
    def test_all_and_none(self):
        assert sample(K10, design("uniform", 10)).members == frozenset(range(10))
        assert len(sample(K10, design("uniform", 0))) == 0

    def test_inclusion_frequency(self):
        trials = 100_000
        rng = np.random.default_rng(2024)
        counts = Counter()
        for _ in range(trials):
            counts.update(sample(K10, design("uniform", 3, seed=rng)).members)
        assert all(within_3_sigma(counts[v], trials, 0.3) for v in range(10))

    def test_too_many(self):
        with pytest.raises(SamplingError):
            sample(K10, design("uniform", 11))


class TestNearFar:
    def test_closeness_formula(self):
        assert closeness_weights([1.0, 2.0, 3.0]).tolist() == [3.0, 2.0, 1.0]

    def test_first_draw_near_k3_formula(self):
        # strengths (1, 2, 3) give weights (3, 2, 1): probabilities 1/2, 1/3, 1/6
        trials = 100_000
        rng = np.random.default_rng(7)
        w = closeness_weights([1.0, 2.0, 3.0])
        counts = Counter(weighted_draw_without_replacement(rng, w, 1)[0] for _ in range(trials))
        for v, p in enumerate((1 / 2, 1 / 3, 1 / 6)):
            assert within_3_sigma(counts[v], trials, p)

    def test_near_complete_uses_strength(self):
        g = WeightedGraph(3, ((0, 1, 0.5), (1, 2, 1.0), (0, 2, 1.5)))  # strengths 2, 1.5, 2.5
        assert near_weights(g).tolist() == [2.5 - 2 + 1.5, 2.5 - 1.5 + 1.5, 2.5 - 2.5 + 1.5]
        assert far_weights(g).tolist() == [2.0, 1.5, 2.5]

    def test_near_degree_rule_with_isolate(self):
        g = WeightedGraph(4, ((1, 2, 1.0), (2, 3, 1.0)))  # degrees 0, 1, 2, 1
        assert near_weights(g).tolist() == [1.0, 2.0, 3.0, 2.0]

    def test_far_degree_rule(self):
        g = WeightedGraph(4, ((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)))  # degrees 1, 3, 2, 2
        assert far_weights(g).tolist() == [3.0, 1.0, 2.0, 2.0]

    def test_far_equal_degrees_uniform(self):
        cycle = WeightedGraph(5, tuple((i, (i + 1) % 5, 1.0) for i in range(5)))
        assert len(set(far_weights(cycle).tolist())) == 1

    def test_far_first_draw_frequency(self):
        g = WeightedGraph(3, ((0, 1, 0.5), (1, 2, 1.0), (0, 2, 1.5)))
        trials = 60_000
        rng = np.random.default_rng(8)
        counts = Counter(sample(g, design("far", 1, seed=rng)).order_recorded[0] for _ in range(trials))
        for v, p in enumerate((2 / 6, 1.5 / 6, 2.5 / 6)):
            assert within_3_sigma(counts[v], trials, p)

    def test_draw_rejects_zero_weight(self):
        with pytest.raises(SamplingError):
            weighted_draw_without_replacement(np.random.default_rng(0), [1.0, 0.0], 2)

    def test_sequential_renormalisation(self):
        # weights (3, 1): P(order = (1, 0)) = 1/4 * 1 exactly; chi-square on both orders
        trials = 40_000
        rng = np.random.default_rng(9)
        counts = Counter(tuple(weighted_draw_without_replacement(rng, [3.0, 1.0], 2)) for _ in range(trials))
        stat = oracles.chi_square([counts[(0, 1)], counts[(1, 0)]], [0.75 * trials, 0.25 * trials])
        assert stat < oracles.CHI2_99[1]


class TestRandomWalk:
    def test_edgeless_graph(self):
        g = WeightedGraph(5, ())
        assert len(sample(g, design("random_walk", 3, seed=1))) == 3

    def test_star_leaf_goes_to_hub(self):
        star = WeightedGraph(6, tuple((0, k, float(k)) for k in range(1, 6)))
        rng = np.random.default_rng(3)
        for _ in range(300):
            order = sample(star, design("random_walk", 2, seed=rng)).order_recorded
            if order[0] != 0:
                assert order[1] == 0

    def test_two_neighbour_probabilities(self):
        # node 0 has neighbours 1 (edge 1.0) and 2 (edge 3.0): weights (3, 1)
        g = WeightedGraph(3, ((0, 1, 1.0), (0, 2, 3.0)))
        rng = np.random.default_rng(11)
        starts = to_one = 0
        for _ in range(100_000):
            order = sample(g, design("random_walk", 2, seed=rng)).order_recorded
            if order[0] == 0:
                starts += 1
                to_one += order[1] == 1
        assert within_3_sigma(to_one, starts, 0.75)

    def test_strength_scoring(self):
        # strengths: node 1 -> 1.0 + 5.0, node 2 -> 3.0; strength scoring favours node 2
        g = WeightedGraph(4, ((0, 1, 1.0), (0, 2, 3.0), (1, 3, 5.0)))
        rng = np.random.default_rng(12)
        starts = to_two = 0
        for _ in range(30_000):
            order = sample(g, design("random_walk", 2, seed=rng, neighbor_score="strength")).order_recorded
            if order[0] == 0:
                starts += 1
                to_two += order[1] == 2
        # scores (6, 3) -> weights (3, 6): P(node 2) = 2/3
        assert within_3_sigma(to_two, starts, 2 / 3)

    def test_restart_vs_continue(self):
        # on a path, "continue" may walk back through recorded nodes; both must finish
        g = WeightedGraph(6, tuple((i, i + 1, 1.0) for i in range(5)))
        for rule in ("restart", "continue"):
            s = sample(g, design("random_walk", 6, seed=4, on_revisit=rule))
            assert s.members == frozenset(range(6))

    def test_unknown_options(self):
        with pytest.raises(SamplingError):
            design("random_walk", 2, neighbor_score="degree")
        with pytest.raises(SamplingError):
            design("random_walk", 2, on_revisit="stop")


class TestQuadrant:
    g = WeightedGraph(4, ((0, 1, 1.0),), coords=((1, 1), (-1, 1), (-1, -1), (1, -1)))

    def test_first(self):
        assert sample(self.g, design("quadrant", quadrants={"I"})).members == {0}

    def test_half_plane(self):
        assert sample(self.g, design("quadrant", quadrants={"I", "II"})).members == {0, 3}

    def test_three_quadrants(self):
        assert sample(self.g, design("quadrant", quadrants={"I", "II", "IV"})).members == {0, 1, 3}

    def test_boundary_included(self):
        assert in_quadrants(0.0, 0.0, {"I"})
        assert in_quadrants(0.0, -1.0, {"II"}) and not in_quadrants(-1e-300, 0.0, {"I", "II"})

    def test_needs_coords(self):
        with pytest.raises(SamplingError):
            sample(K10, design("quadrant", quadrants={"I"}))

    def test_bad_quadrants(self):
        with pytest.raises(SamplingError):
            design("quadrant", quadrants=set())
        with pytest.raises(SamplingError):
            design("quadrant", quadrants={"V"})


@given(
    st.sampled_from(["complete", "gnp", "normal", "ba"]),
    st.sampled_from(["uniform", "near", "far", "random_walk"]),
    st.integers(4, 30),
    st.data(),
)
@settings(max_examples=80, deadline=None)
def test_distinct_and_sized(kind, how, n_nodes, data):
    g = generate(GeneratorConfig(GraphKind(kind), n_nodes, m_attach=min(3, n_nodes - 1), seed=n_nodes))
    n = data.draw(st.integers(0, n_nodes))
    s = sample(g, design(how, n, seed=data.draw(st.integers(0, 2**31))))
    assert len(s.order_recorded) == len(set(s.order_recorded)) == n
    assert all(0 <= v < n_nodes for v in s.members)


def test_negative_size():
    with pytest.raises(SamplingError):
        design("uniform", -1)
