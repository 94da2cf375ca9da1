"""Immutable weighted undirected graphs and the primitives built on them."""

from __future__ import annotations

import dataclasses
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graphs or invalid queries against a graph."""


class Edge(NamedTuple):
    u: int
    v: int
    w: float


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Simple undirected graph over nodes ``0..n_nodes-1``.

    ``labels`` maps each local node to its id in the root graph it was
    derived from, so forests of a graph and of its induced subgraphs can be
    compared directly. ``names`` holds external string ids for ingested data.
    ``parent_edge`` records, for induced subgraphs, the index of each edge in
    the parent graph.
    """

    n_nodes: int
    edges: tuple[Edge, ...]
    coords: tuple[tuple[float, float], ...] | None = None
    region: tuple[str | None, ...] | None = None
    labels: tuple[int, ...] | None = None
    names: tuple[str, ...] | None = None
    parent_edge: tuple[int, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        n = self.n_nodes
        if n < 0:
            raise GraphError("negative node count")
        canon = []
        seen = set()
        for e in self.edges:
            u, v, w = int(e[0]), int(e[1]), float(e[2])
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references unknown node")
            if not (w > 0 and math.isfinite(w)):
                raise GraphError(f"edge ({u}, {v}) has non-positive or non-finite weight {w!r}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphError(f"parallel edge ({u}, {v})")
            seen.add((u, v))
            canon.append(Edge(u, v, w))
        object.__setattr__(self, "edges", tuple(canon))
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(n)))
        for name in ("coords", "region", "labels", "names"):
            attr = getattr(self, name)
            if attr is not None:
                if len(attr) != n:
                    raise GraphError(f"{name} has {len(attr)} entries for {n} nodes")
                object.__setattr__(self, name, tuple(attr))
        if self.parent_edge is not None and len(self.parent_edge) != len(canon):
            raise GraphError("parent_edge length does not match edge count")

    @classmethod
    def _trusted(cls, n_nodes: int, u: np.ndarray, v: np.ndarray, w: np.ndarray, **attrs) -> WeightedGraph:
        """Build from edge arrays without per-edge validation.

        Callers guarantee ``u < v``, no duplicates and positive finite weights.
        """
        g = object.__new__(cls)
        object.__setattr__(g, "n_nodes", n_nodes)
        object.__setattr__(g, "edges", tuple(map(Edge._make, zip(u.tolist(), v.tolist(), w.tolist()))))
        for f in dataclasses.fields(cls)[2:]:
            object.__setattr__(g, f.name, attrs.get(f.name))
        if g.labels is None:
            object.__setattr__(g, "labels", tuple(range(n_nodes)))
        g.__dict__["edge_arrays"] = (u, v, w)
        return g

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Endpoint and weight arrays aligned with ``edges``."""
        m = len(self.edges)
        u = np.fromiter((e[0] for e in self.edges), dtype=np.int64, count=m)
        v = np.fromiter((e[1] for e in self.edges), dtype=np.int64, count=m)
        w = np.fromiter((e[2] for e in self.edges), dtype=float, count=m)
        return u, v, w

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def nodes(self) -> range:
        return range(self.n_nodes)

    def is_complete(self) -> bool:
        n = self.n_nodes
        return self.n_edges == n * (n - 1) // 2

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node, a tuple of ``(neighbor, edge_index)`` pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_nodes)]
        for i, (u, v, _) in enumerate(self.edges):
            adj[u].append((v, i))
            adj[v].append((u, i))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(e.u, e.v): i for i, e in enumerate(self.edges)}

    @cached_property
    def strengths(self) -> tuple[float, ...]:
        s = [0.0] * self.n_nodes
        for u, v, w in self.edges:
            s[u] += w
            s[v] += w
        return tuple(s)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def key(self, i: int) -> tuple[int, int]:
        """Root-label key of edge ``i``; stable across induced subgraphs."""
        u, v, _ = self.edges[i]
        return edge_key(self.labels[u], self.labels[v])

    @cached_property
    def edge_keys(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.key(i) for i in range(self.n_edges))

    def find_edge(self, u: int, v: int) -> int:
        try:
            return self.edge_index[edge_key(u, v)]
        except KeyError:
            raise GraphError(f"no edge ({u}, {v})") from None

    def _check_node(self, v: int) -> None:
        if not 0 <= v < self.n_nodes:
            raise GraphError(f"unknown node {v}")


@dataclass(frozen=True)
class NodeSubset:
    members: frozenset[int]
    order_recorded: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        order = tuple(self.order_recorded)
        if len(set(order)) != len(order):
            raise GraphError("duplicate node in recorded order")
        if order and set(order) != self.members:
            raise GraphError("recorded order disagrees with members")
        object.__setattr__(self, "order_recorded", order)

    @classmethod
    def from_order(cls, order: Sequence[int]) -> NodeSubset:
        return cls(frozenset(order), tuple(order))

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Cut:
    side_a: frozenset[int]
    side_b: frozenset[int]
    crossing_edges: frozenset[int]  # edge indices into the host graph


def induced_subgraph(g: WeightedGraph, s: NodeSubset | Iterable[int]) -> WeightedGraph:
    """Subgraph on the nodes of ``s`` containing every edge with both ends in ``s``.

    Nodes are relabelled densely in ascending order of their id in ``g``;
    ``labels`` and ``parent_edge`` keep the way back.
    """
    members = s.members if isinstance(s, NodeSubset) else frozenset(s)
    for v in members:
        if not (isinstance(v, (int,)) or hasattr(v, "__index__")) or not 0 <= v < g.n_nodes:
            raise GraphError(f"invalid subset: unknown node {v!r}")
    keep = sorted(members)
    local = np.full(g.n_nodes, -1, dtype=np.int64)
    local[keep] = np.arange(len(keep))
    u, v, w = g.edge_arrays
    lu, lv = local[u], local[v]
    idx = np.flatnonzero((lu >= 0) & (lv >= 0))
    return WeightedGraph._trusted(
        len(keep),
        lu[idx], lv[idx], w[idx],
        coords=None if g.coords is None else tuple(g.coords[x] for x in keep),
        region=None if g.region is None else tuple(g.region[x] for x in keep),
        labels=tuple(g.labels[x] for x in keep),
        names=None if g.names is None else tuple(g.names[x] for x in keep),
        parent_edge=tuple(idx.tolist()),
    )


def components(g: WeightedGraph) -> list[list[int]]:
    """Connected components as sorted node lists, ordered by smallest member."""
    seen = [False] * g.n_nodes
    blocks = []
    adj = g.adjacency
    for start in g.nodes:
        if seen[start]:
            continue
        seen[start] = True
        block = [start]
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y, _ in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    block.append(y)
                    queue.append(y)
        blocks.append(sorted(block))
    return blocks


def count_components(g: WeightedGraph) -> int:
    return len(components(g))


def strength(g: WeightedGraph, v: int) -> float:
    g._check_node(v)
    return g.strengths[v]


def degree(g: WeightedGraph, v: int) -> int:
    g._check_node(v)
    return g.degrees[v]


def cut_from_partition(g: WeightedGraph, side_a: Iterable[int]) -> Cut:
    a = frozenset(side_a)
    for v in a:
        g._check_node(v)
    if not a or len(a) == g.n_nodes:
        raise GraphError("invalid partition: side must be a non-empty proper subset")
    b = frozenset(g.nodes) - a
    crossing = frozenset(i for i, (u, v, _) in enumerate(g.edges) if (u in a) != (v in a))
    return Cut(a, b, crossing)
