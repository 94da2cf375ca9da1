"""Minimum spanning forests under explicit edge orderings, plus exhaustive oracles.

Every forest computation takes an :class:`EdgeOrdering`. Treating an edge's
rank as its weight makes all weights distinct, so each ordering determines
exactly one minimum spanning forest.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import GraphError, WeightedGraph, components, cut_from_partition, edge_key


class SizeLimitError(ValueError):
    """The requested exhaustive computation exceeds its configured cap."""


class NotAnMSTError(ValueError):
    pass


class UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True, eq=False)
class EdgeOrdering:
    """Strict total order on a graph's edges.

    ``rank[i]`` is the 1-based position of edge ``i``; ``sequence`` lists edge
    indices from lowest to highest rank.
    """

    rank: tuple[int, ...]
    sequence: tuple[int, ...] = field(repr=False, default=())

    def __post_init__(self):
        m = len(self.rank)
        if sorted(self.rank) != list(range(1, m + 1)):
            raise ValueError("rank is not a permutation of 1..m")
        if not self.sequence and m:
            seq = [0] * m
            for i, r in enumerate(self.rank):
                seq[r - 1] = i
            object.__setattr__(self, "sequence", tuple(seq))

    @classmethod
    def from_sequence(cls, sequence: Sequence[int]) -> EdgeOrdering:
        """Ordering that lists edges in ``sequence`` order (a permutation of 0..m-1)."""
        seq = np.asarray(sequence, dtype=np.int64)
        if seq.size and (np.sort(seq) != np.arange(seq.size)).any():
            raise ValueError("sequence is not a permutation of edge indices")
        rank = np.empty(seq.size, dtype=np.int64)
        rank[seq] = np.arange(1, seq.size + 1)
        obj = object.__new__(cls)
        object.__setattr__(obj, "rank", tuple(rank.tolist()))
        object.__setattr__(obj, "sequence", tuple(seq.tolist()))
        return obj

    def __len__(self) -> int:
        return len(self.rank)

    def __eq__(self, other):
        return isinstance(other, EdgeOrdering) and self.rank == other.rank

    def __hash__(self):
        return hash(self.rank)

    def is_weight_consistent(self, g: WeightedGraph) -> bool:
        ws = [g.edges[i].w for i in self.sequence]
        return len(ws) == g.n_edges and all(a <= b for a, b in zip(ws, ws[1:]))

    def restrict(self, sub: WeightedGraph) -> EdgeOrdering:
        """Ordering induced on ``sub``, an induced subgraph of this ordering's graph."""
        if sub.parent_edge is None:
            raise GraphError("graph carries no parent-edge mapping")
        parent_rank = np.asarray(self.rank)[np.asarray(sub.parent_edge, dtype=np.int64)]
        return EdgeOrdering.from_sequence(np.argsort(parent_rank, kind="stable").tolist())


def weight_ordering(g: WeightedGraph, tiebreak_seed) -> EdgeOrdering:
    """Sort edges by weight; equal-weight groups are shuffled uniformly by the seed."""
    m = g.n_edges
    rng = np.random.default_rng(tiebreak_seed)
    tie = rng.permutation(m)
    seq = np.lexsort((tie, g.edge_arrays[2]))
    return EdgeOrdering.from_sequence(seq.tolist())


@dataclass(frozen=True)
class Forest:
    edges: frozenset[int]
    host: WeightedGraph = field(compare=False, hash=False, repr=False)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def keys(self) -> frozenset[tuple[int, int]]:
        """Edges as root-label pairs, comparable across induced subgraphs."""
        key = self.host.key
        return frozenset(key(i) for i in self.edges)

    def weights(self) -> list[float]:
        return sorted(self.host.edges[i].w for i in self.edges)


def _kruskal(n: int, edges, sequence: Iterable[int]) -> list[int]:
    uf = UnionFind(n)
    out = []
    target = n - 1
    for i in sequence:
        u, v, _ = edges[i]
        if uf.union(u, v):
            out.append(i)
            if len(out) == target:
                break
    return out


def msf(g: WeightedGraph, ordering: EdgeOrdering) -> Forest:
    """Unique minimum spanning forest of ``g`` with ranks as effective weights."""
    if len(ordering) != g.n_edges:
        raise GraphError("ordering does not match the graph's edge count")
    return Forest(frozenset(_kruskal(g.n_nodes, g.edges, ordering.sequence)), g)


def is_spanning_forest(g: WeightedGraph, edges: Iterable[int]) -> bool:
    edges = list(edges)
    uf = UnionFind(g.n_nodes)
    for i in edges:
        u, v, _ = g.edges[i]
        if not uf.union(u, v):
            return False
    return len(edges) == g.n_nodes - len(components(g))


def _exact_weights(g: WeightedGraph) -> list[int]:
    """Weights scaled to integers by a common power of two; sums are then exact."""
    ratios = [e.w.as_integer_ratio() for e in g.edges]
    if not ratios:
        return []
    den = max(d for _, d in ratios)
    return [num * (den // d) for num, d in ratios]


def enumerate_msts(g: WeightedGraph, cap: int = 16) -> set[Forest]:
    """All minimum-weight spanning forests, by exhaustive subset search."""
    m = g.n_edges
    if m > cap:
        raise SizeLimitError(f"{m} edges exceeds enumeration cap {cap}")
    target = g.n_nodes - len(components(g))
    w = _exact_weights(g)
    edges = g.edges
    best = [math.inf]
    found: list[tuple[int, ...]] = []

    def search(i: int, parent: list[int], chosen: list[int], total: int) -> None:
        if total > best[0]:
            return
        if len(chosen) == target:
            if total < best[0]:
                best[0] = total
                found.clear()
            found.append(tuple(chosen))
            return
        if m - i < target - len(chosen):
            return
        u, v, _ = edges[i]
        ru, rv = _root(parent, u), _root(parent, v)
        if ru != rv:
            p2 = parent.copy()
            p2[rv] = ru
            chosen.append(i)
            search(i + 1, p2, chosen, total + w[i])
            chosen.pop()
        search(i + 1, parent, chosen, total)

    search(0, list(range(g.n_nodes)), [], 0)
    return {Forest(frozenset(c), g) for c in found}


def _root(parent: list[int], x: int) -> int:
    while parent[x] != x:
        x = parent[x]
    return x


def tie_groups(g: WeightedGraph) -> list[list[int]]:
    """Edge indices grouped by bitwise-equal weight, groups in ascending weight."""
    by_w: dict[float, list[int]] = {}
    for i, e in enumerate(g.edges):
        by_w.setdefault(e.w, []).append(i)
    return [by_w[w] for w in sorted(by_w)]


def count_weight_consistent_orderings(g: WeightedGraph) -> int:
    return math.prod(math.factorial(len(grp)) for grp in tie_groups(g))


def count_orderings_per_mst(g: WeightedGraph, cap: int = 10**6) -> dict[Forest, int]:
    """Run every weight-consistent ordering and tally the forest each one yields."""
    total = count_weight_consistent_orderings(g)
    if total > cap:
        raise SizeLimitError(f"{total} orderings exceeds enumeration cap {cap}")
    groups = tie_groups(g)
    counts: Counter[frozenset[int]] = Counter()
    n, edges = g.n_nodes, g.edges
    for perms in itertools.product(*(itertools.permutations(grp) for grp in groups)):
        seq = itertools.chain.from_iterable(perms)
        counts[frozenset(_kruskal(n, edges, seq))] += 1
    return {Forest(k, g): c for k, c in counts.items()}


def _edge_arg(g: WeightedGraph, e) -> int:
    if isinstance(e, (int, np.integer)):
        if not 0 <= e < g.n_edges:
            raise GraphError(f"no edge with index {e}")
        return int(e)
    return g.find_edge(e[0], e[1])


def _lower_rank_path(g: WeightedGraph, ordering: EdgeOrdering, i: int) -> list[int] | None:
    """Edge path between the endpoints of edge ``i`` using only lower-ranked edges."""
    u, v, _ = g.edges[i]
    r = ordering.rank[i]
    rank = ordering.rank
    prev: dict[int, tuple[int, int]] = {u: (-1, -1)}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for y, j in g.adjacency[x]:
            if y not in prev and rank[j] < r:
                prev[y] = (x, j)
                queue.append(y)
    if v not in prev:
        return None
    path = []
    x = v
    while x != u:
        x, j = prev[x]
        path.append(j)
    return path


def _lower_rank_reach(g: WeightedGraph, ordering: EdgeOrdering, i: int) -> set[int]:
    u = g.edges[i].u
    r = ordering.rank[i]
    rank = ordering.rank
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y, j in g.adjacency[x]:
            if y not in seen and rank[j] < r:
                seen.add(y)
                stack.append(y)
    return seen


def check_cycle_property(g: WeightedGraph, ordering: EdgeOrdering, e) -> bool:
    """True iff edge ``e`` is the top-ranked edge of some cycle in ``g``."""
    i = _edge_arg(g, e)
    path = _lower_rank_path(g, ordering, i)
    if path is None:
        return False
    cycle = path + [i]
    return max(cycle, key=ordering.rank.__getitem__) == i


def check_cut_property(g: WeightedGraph, ordering: EdgeOrdering, e) -> bool:
    """True iff edge ``e`` is the bottom-ranked crossing edge of some cut of ``g``.

    The candidate cut separates the nodes reachable from one endpoint through
    lower-ranked edges from the rest of the graph.
    """
    i = _edge_arg(g, e)
    side = _lower_rank_reach(g, ordering, i)
    if g.edges[i].v in side:
        return False
    cut = cut_from_partition(g, side)
    return min(cut.crossing_edges, key=ordering.rank.__getitem__) == i


def _as_keys(x) -> frozenset:
    return x.keys if isinstance(x, Forest) else frozenset(x)


def verify_npv(t_pop, e_sample, t_sample) -> bool:
    """True iff no sampled non-forest edge belongs to the population forest.

    Arguments are :class:`Forest` objects or collections of root-label edge keys.
    """
    if isinstance(e_sample, WeightedGraph):
        e_sample = e_sample.edge_keys
    return not (_as_keys(t_pop) & (_as_keys(e_sample) - _as_keys(t_sample)))


def _check_mst(g: WeightedGraph, f: Forest, reference: list[float]) -> None:
    if not is_spanning_forest(g, f.edges) or f.weights() != reference:
        raise NotAnMSTError("forest is not a minimum spanning forest of the graph")


def exchange_witness(a: Forest, b: Forest, g: WeightedGraph) -> list[tuple[int, int]]:
    """Swap sequence turning MST ``a`` into MST ``b`` one equal-weight exchange at a time.

    Each step removes the lightest edge of ``current - b`` and inserts an edge
    of ``b`` that reconnects the two sides of the resulting cut along the
    cycle it closes in ``b``.
    """
    some_ordering = weight_ordering(g, 0)
    reference = msf(g, some_ordering).weights()
    _check_mst(g, a, reference)
    _check_mst(g, b, reference)
    edges = g.edges
    current = set(a.edges)
    target = set(b.edges)
    b_adj: dict[int, list[tuple[int, int]]] = {}
    for j in target:
        u, v, _ = edges[j]
        b_adj.setdefault(u, []).append((v, j))
        b_adj.setdefault(v, []).append((u, j))
    swaps = []
    while current != target:
        out = min(current - target, key=lambda j: (edges[j].w, j))
        u, v, w = edges[out]
        current.discard(out)
        side = _reach(current, edges, u)
        path = _tree_path(b_adj, u, v)
        crossing = [j for j in path if (edges[j].u in side) != (edges[j].v in side)]
        inn = crossing[0]
        if inn in current or edges[inn].w != w:
            raise AssertionError("exchange step violated the equal-weight invariant")
        current.add(inn)
        swaps.append((out, inn))
    return swaps


def _reach(tree: set[int], edges, start: int) -> set[int]:
    adj: dict[int, list[int]] = {}
    for j in tree:
        u, v, _ = edges[j]
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def _tree_path(adj: dict[int, list[tuple[int, int]]], u: int, v: int) -> list[int]:
    prev: dict[int, tuple[int, int]] = {u: (-1, -1)}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            break
        for y, j in adj.get(x, ()):
            if y not in prev:
                prev[y] = (x, j)
                stack.append(y)
    path = []
    x = v
    while x != u:
        x, j = prev[x]
        path.append(j)
    return path


def apply_swaps(a: Forest, swaps: Sequence[tuple[int, int]]) -> list[Forest]:
    """Intermediate forests produced by applying ``swaps`` to ``a`` in turn."""
    cur = set(a.edges)
    out = []
    for e_out, e_in in swaps:
        cur.remove(e_out)
        cur.add(e_in)
        out.append(Forest(frozenset(cur), a.host))
    return out


__all__ = [
    "EdgeOrdering",
    "Forest",
    "NotAnMSTError",
    "SizeLimitError",
    "UnionFind",
    "apply_swaps",
    "check_cut_property",
    "check_cycle_property",
    "count_orderings_per_mst",
    "count_weight_consistent_orderings",
    "edge_key",
    "enumerate_msts",
    "exchange_witness",
    "is_spanning_forest",
    "msf",
    "tie_groups",
    "verify_npv",
    "weight_ordering",
]
