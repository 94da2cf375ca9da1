"""Randomised executable checks of the MST facts the pipeline relies on.

Each check draws small random graphs, computes the property two ways and
reports the first seed at which they disagree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import seeding
from .generators import GeneratorConfig, GraphKind, generate
from .graph import Edge, NodeSubset, WeightedGraph, components, induced_subgraph
from .mst import (
    EdgeOrdering,
    Forest,
    check_cut_property,
    check_cycle_property,
    count_orderings_per_mst,
    count_weight_consistent_orderings,
    enumerate_msts,
    exchange_witness,
    apply_swaps,
    msf,
    verify_npv,
    weight_ordering,
)
from .sampling import SampleDesign, SampleKind, sample


@dataclass
class CheckResult:
    name: str
    passed: bool
    instances: int
    failing_seed: int | None = None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" (seed {self.failing_seed}: {self.detail})" if not self.passed else ""
        return f"{status} {self.name} [{self.instances} instances]{extra}"


def random_graph(rng: np.random.Generator, n_nodes: int, p: float = 0.6, levels: int | None = None,
                 max_edges: int | None = None) -> WeightedGraph:
    """Random simple graph; with ``levels`` the weights come from ``levels`` values so ties are planted."""
    pairs = [(u, v) for u in range(n_nodes) for v in range(u + 1, n_nodes) if rng.random() < p]
    if max_edges is not None and len(pairs) > max_edges:
        keep = sorted(rng.choice(len(pairs), size=max_edges, replace=False).tolist())
        pairs = [pairs[i] for i in keep]
    if levels:
        w = (rng.integers(1, levels + 1, size=len(pairs)) / levels).tolist()
    else:
        w = (rng.random(len(pairs)) + 1e-9).tolist()
    return WeightedGraph(n_nodes, tuple(Edge(u, v, x) for (u, v), x in zip(pairs, w)))


def reweighted(g: WeightedGraph, weights) -> WeightedGraph:
    return WeightedGraph(g.n_nodes, tuple(Edge(e.u, e.v, float(w)) for e, w in zip(g.edges, weights)),
                         coords=g.coords, region=g.region, labels=g.labels, names=g.names)


def rank_graph(g: WeightedGraph, ordering: EdgeOrdering) -> WeightedGraph:
    """Copy of ``g`` whose weights are the ordering's ranks (all distinct)."""
    return reweighted(g, ordering.rank)


# individual checks: each returns an error string or None


def forest_size(g: WeightedGraph, ordering: EdgeOrdering) -> str | None:
    f = msf(g, ordering)
    k = len(components(g))
    if len(f) != g.n_nodes - k:
        return f"|forest|={len(f)} but N-K={g.n_nodes - k}"
    return None


def msf_matches_bruteforce(g: WeightedGraph, ordering: EdgeOrdering) -> str | None:
    brute = enumerate_msts(rank_graph(g, ordering), cap=max(16, g.n_edges))
    fast = msf(g, ordering)
    if len(brute) != 1 or next(iter(brute)).edges != fast.edges:
        return "Kruskal forest differs from the exhaustive minimum"
    return None


def cut_cycle_agree(g: WeightedGraph, ordering: EdgeOrdering) -> str | None:
    tree = msf(g, ordering).edges
    for i in range(g.n_edges):
        in_tree = i in tree
        if check_cut_property(g, ordering, i) != in_tree:
            return f"cut property disagrees with the forest on edge {g.edges[i][:2]}"
        if check_cycle_property(g, ordering, i) == in_tree:
            return f"cycle property disagrees with the forest on edge {g.edges[i][:2]}"
    return None


def npv_holds(g: WeightedGraph, ordering: EdgeOrdering, s: NodeSubset, mutate: bool = False) -> str | None:
    t_pop = msf(g, ordering)
    h = induced_subgraph(g, s)
    t_h = msf(h, ordering.restrict(h)).keys
    if mutate:
        shared = sorted(t_h & t_pop.keys)
        if shared:
            t_h = t_h - {shared[0]}
    if not verify_npv(t_pop, h.edge_keys, t_h):
        return "a population-forest edge lies in the sample graph but not the sample forest"
    return None


def orderings_match_enumeration(g: WeightedGraph, counts=None, msts=None) -> str | None:
    counts = count_orderings_per_mst(g) if counts is None else counts
    msts = enumerate_msts(g) if msts is None else msts
    if set(counts) != msts:
        return f"ordering enumeration found {len(counts)} forests, brute force {len(msts)}"
    if sum(counts.values()) != count_weight_consistent_orderings(g):
        return "ordering counts do not sum to the product of tie-group factorials"
    return None


def exchange_valid(g: WeightedGraph, msts) -> str | None:
    msts = sorted(msts, key=lambda f: sorted(f.edges))
    reference = msts[0].weights()
    for a in msts:
        for b in msts:
            swaps = exchange_witness(a, b, g)
            if len(swaps) != len(a.edges - b.edges):
                return "swap count differs from |A \\ B|"
            for e_out, e_in in swaps:
                if g.edges[e_out].w != g.edges[e_in].w:
                    return "swap exchanges unequal weights"
            steps = apply_swaps(a, swaps)
            if steps and steps[-1].edges != b.edges:
                return "swap sequence does not end at B"
            if any(f not in msts or f.weights() != reference for f in steps):
                return "intermediate forest is not an MST"
            wa = sorted(g.edges[i].w for i in a.edges - b.edges)
            wb = sorted(g.edges[i].w for i in b.edges - a.edges)
            if wa != wb:
                return "weight multisets of A\\B and B\\A differ"
    return None


_KINDS = (GraphKind.COMPLETE, GraphKind.GNP, GraphKind.NORMAL, GraphKind.BARABASI_ALBERT)
_DESIGNS = (SampleKind.UNIFORM, SampleKind.NEAR, SampleKind.FAR, SampleKind.RANDOM_WALK, SampleKind.QUADRANT)


def npv_instance(seed: int, t: int, max_nodes: int = 30, mutate: bool = False) -> str | None:
    """One randomised NPV instance cycling through generators and sampling designs."""
    rng = seeding.rng(seed, t)
    kind = _KINDS[t % len(_KINDS)]
    design_kind = _DESIGNS[(t // len(_KINDS)) % len(_DESIGNS)]
    if design_kind is SampleKind.QUADRANT:
        kind = GraphKind.NORMAL
    n_nodes = int(rng.integers(5, max_nodes + 1))
    g = generate(GeneratorConfig(kind, n_nodes, p=0.5, m_attach=min(3, n_nodes - 1), seed=seeding.derive(seed, t, 0)))
    if t % 3 == 0:
        # coarsen weights so ties occur and the ordering matters
        g = reweighted(g, [math.ceil(e.w * 4) / 4 for e in g.edges])
    ordering = weight_ordering(g, seeding.derive(seed, t, 1))
    n = int(rng.integers(0, n_nodes + 1))
    quads = [frozenset({"I"}), frozenset({"I", "II"}), frozenset({"I", "II", "IV"})][t % 3]
    s = sample(g, SampleDesign(design_kind, n=n, quadrants=quads, seed=seeding.derive(seed, t, 2)))
    return npv_holds(g, ordering, s, mutate=mutate)


def _loop(name: str, count: int, seed: int, body: Callable[[int], str | None]) -> CheckResult:
    for t in range(count):
        err = body(t)
        if err:
            return CheckResult(name, False, t + 1, failing_seed=t, detail=err)
    return CheckResult(name, True, count)


def _small(seed: int, t: int, sizes, levels=None, max_edges=None) -> WeightedGraph:
    rng = seeding.rng(seed, 1000 + t)
    n = int(rng.choice(list(sizes)))
    return random_graph(rng, n, p=float(rng.uniform(0.3, 0.9)), levels=levels, max_edges=max_edges)


def run_suite(seed: int = 0, sizes=(4, 5, 6, 7, 8), instances: int = 200, mutate: bool = False) -> list[CheckResult]:
    results = []

    def ordered(t):
        g = _small(seed, t, sizes, levels=3, max_edges=16)
        return g, weight_ordering(g, seeding.derive(seed, t))

    results.append(_loop("forest size |T| = N - K", instances, seed, lambda t: forest_size(*ordered(t))))
    results.append(_loop("MSF equals exhaustive minimum (uniqueness)", instances, seed,
                         lambda t: msf_matches_bruteforce(*ordered(t))))
    results.append(_loop("cut and cycle properties", instances, seed, lambda t: cut_cycle_agree(*ordered(t))))
    results.append(_loop("NPV identity", instances * 5, seed,
                         lambda t: npv_instance(seed, t, mutate=mutate)))

    def tied(t):
        for attempt in range(50):
            g = _small(seed, t * 50 + attempt, sizes, levels=2, max_edges=10)
            if count_weight_consistent_orderings(g) <= 50_000:
                return g
        return _small(seed, t, sizes, levels=None, max_edges=10)

    cache: dict[int, tuple] = {}

    def tied_msts(t):
        if t not in cache:
            g = tied(t)
            cache[t] = (g, enumerate_msts(g))
        return cache[t]

    results.append(_loop("ordering enumeration reaches exactly the MST set", instances // 4, seed,
                         lambda t: orderings_match_enumeration(tied_msts(t)[0], msts=tied_msts(t)[1])))
    results.append(_loop("exchange bijection between MSTs", instances // 4, seed,
                         lambda t: exchange_valid(*tied_msts(t))))
    return results
