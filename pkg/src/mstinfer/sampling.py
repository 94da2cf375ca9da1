"""Node-sampling strategies: uniform, near, far, edge-weighted random walk, quadrant."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .graph import NodeSubset, WeightedGraph


class SampleKind(str, enum.Enum):
    UNIFORM = "uniform"
    NEAR = "near"
    FAR = "far"
    RANDOM_WALK = "random_walk"
    QUADRANT = "quadrant"


QUADRANTS = ("I", "II", "III", "IV")


class SamplingError(ValueError):
    pass


@dataclass(frozen=True)
class SampleDesign:
    kind: SampleKind
    n: int = 0
    quadrants: frozenset[str] = field(default_factory=frozenset)
    seed: object = 0
    # random walk only. neighbor_score: "edge" scores a neighbour by the connecting
    # edge weight, "strength" by its node strength. on_revisit: "restart" begins a
    # fresh walk when the step lands on a recorded node, "continue" walks on.
    neighbor_score: str = "edge"
    on_revisit: str = "restart"

    def __post_init__(self):
        object.__setattr__(self, "kind", SampleKind(self.kind))
        object.__setattr__(self, "quadrants", frozenset(self.quadrants))
        if self.n < 0:
            raise SamplingError("sample size must be non-negative")
        if self.kind is SampleKind.QUADRANT:
            if not self.quadrants or not self.quadrants <= set(QUADRANTS):
                raise SamplingError(f"quadrants must be a non-empty subset of {QUADRANTS}")
        if self.neighbor_score not in ("strength", "edge"):
            raise SamplingError(f"unknown neighbor_score {self.neighbor_score!r}")
        if self.on_revisit not in ("restart", "continue"):
            raise SamplingError(f"unknown on_revisit {self.on_revisit!r}")

    def replace(self, **kw) -> SampleDesign:
        d = dict(kind=self.kind, n=self.n, quadrants=self.quadrants, seed=self.seed,
                 neighbor_score=self.neighbor_score, on_revisit=self.on_revisit)
        d.update(kw)
        return SampleDesign(**d)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.default_rng(seed)


def _draw_index(rng: np.random.Generator, weights) -> int:
    cum = np.cumsum(weights)
    i = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    return min(i, len(cum) - 1)


def weighted_draw_without_replacement(rng: np.random.Generator, weights, k: int) -> list[int]:
    """Draw ``k`` distinct indices one at a time, renormalising after each draw.

    Every remaining weight must be strictly positive at every draw.
    """
    w = np.asarray(weights, dtype=float).copy()
    idx = np.arange(w.size)
    if k > w.size:
        raise SamplingError(f"cannot draw {k} items from {w.size}")
    out = []
    for _ in range(k):
        if not np.all(w > 0):
            raise SamplingError("selection weights must be strictly positive")
        j = _draw_index(rng, w)
        out.append(int(idx[j]))
        w = np.delete(w, j)
        idx = np.delete(idx, j)
    return out


def _check_n(g: WeightedGraph, n: int) -> None:
    if n > g.n_nodes:
        raise SamplingError(f"sample size {n} exceeds {g.n_nodes} nodes")


def near_weights(g: WeightedGraph) -> np.ndarray:
    if g.n_nodes >= 2 and g.is_complete():
        s = np.asarray(g.strengths)
        return s.max() - s + s.min()
    d = np.asarray(g.degrees, dtype=float)
    return d if d.min() > 0 else d + 1


def far_weights(g: WeightedGraph) -> np.ndarray:
    if g.n_nodes >= 2 and g.is_complete():
        return np.asarray(g.strengths, dtype=float)
    d = np.asarray(g.degrees, dtype=float)
    return d.max() - d + max(1.0, d.min())


def closeness_weights(scores) -> np.ndarray:
    """Reverse scores so the smallest gets the largest weight, all kept positive."""
    s = np.asarray(scores, dtype=float)
    return s.max() - s + s.min()


def sample_uniform(g: WeightedGraph, design: SampleDesign) -> NodeSubset:
    _check_n(g, design.n)
    rng = _rng(design.seed)
    order = rng.choice(g.n_nodes, size=design.n, replace=False).tolist() if design.n else []
    return NodeSubset.from_order(order)


def sample_near(g: WeightedGraph, design: SampleDesign) -> NodeSubset:
    _check_n(g, design.n)
    order = weighted_draw_without_replacement(_rng(design.seed), near_weights(g), design.n)
    return NodeSubset.from_order(order)


def sample_far(g: WeightedGraph, design: SampleDesign) -> NodeSubset:
    _check_n(g, design.n)
    order = weighted_draw_without_replacement(_rng(design.seed), far_weights(g), design.n)
    return NodeSubset.from_order(order)


def sample_random_walk(g: WeightedGraph, design: SampleDesign) -> NodeSubset:
    """Edge-weighted random walk with restarts.

    A walk starts at a uniformly chosen unrecorded node. From the current
    node it steps to a neighbour chosen with probability favouring low
    scores. Standing on a node without neighbours restarts the walk, as does
    stepping onto an already recorded node unless ``on_revisit="continue"``.
    """
    _check_n(g, design.n)
    rng = _rng(design.seed)
    adj = g.adjacency
    use_edge = design.neighbor_score == "edge"
    walk_on = design.on_revisit == "continue"
    strengths = g.strengths
    recorded: list[int] = []
    seen = np.zeros(g.n_nodes, dtype=bool)
    current = -1
    while len(recorded) < design.n:
        if current < 0:
            pool = np.flatnonzero(~seen)
            current = int(pool[rng.integers(pool.size)])
            seen[current] = True
            recorded.append(current)
            continue
        nbrs = adj[current]
        if not nbrs:
            current = -1
            continue
        if use_edge:
            scores = [g.edges[j].w for _, j in nbrs]
        else:
            scores = [strengths[y] for y, _ in nbrs]
        w = closeness_weights(scores)
        if not np.all(w > 0):
            raise SamplingError("selection weights must be strictly positive")
        nxt = nbrs[_draw_index(rng, w)][0]
        if seen[nxt]:
            current = nxt if walk_on else -1
            continue
        seen[nxt] = True
        recorded.append(nxt)
        current = nxt
    return NodeSubset.from_order(recorded)


def in_quadrants(x: float, y: float, quadrants) -> bool:
    """Closed-boundary quadrant membership.

    I is ``x >= 0, y >= 0``; II is ``x >= 0, y < 0``; III is ``x < 0, y < 0``;
    IV is ``x < 0, y >= 0``. With this labelling {I, II} is the half-plane
    ``x >= 0`` and {I, II, IV} is ``x >= 0 or y >= 0``.
    """
    q = ("I" if y >= 0 else "II") if x >= 0 else ("IV" if y >= 0 else "III")
    return q in quadrants


def sample_quadrant(g: WeightedGraph, design: SampleDesign) -> NodeSubset:
    if g.coords is None:
        raise SamplingError("quadrant sampling needs node coordinates")
    order = [v for v, (x, y) in enumerate(g.coords) if in_quadrants(x, y, design.quadrants)]
    return NodeSubset.from_order(order)


_DISPATCH = {
    SampleKind.UNIFORM: sample_uniform,
    SampleKind.NEAR: sample_near,
    SampleKind.FAR: sample_far,
    SampleKind.RANDOM_WALK: sample_random_walk,
    SampleKind.QUADRANT: sample_quadrant,
}


def sample(g: WeightedGraph, design: SampleDesign) -> NodeSubset:
    return _DISPATCH[design.kind](g, design)


__all__ = [
    "QUADRANTS",
    "SampleDesign",
    "SampleKind",
    "SamplingError",
    "closeness_weights",
    "far_weights",
    "in_quadrants",
    "near_weights",
    "sample",
    "sample_far",
    "sample_near",
    "sample_quadrant",
    "sample_random_walk",
    "sample_uniform",
    "weighted_draw_without_replacement",
]
