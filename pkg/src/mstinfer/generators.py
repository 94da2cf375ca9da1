"""Seeded population-graph families: complete, G(N, p), planar normal, Barabasi-Albert."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph
from .sampling import weighted_draw_without_replacement


class GraphKind(str, enum.Enum):
    COMPLETE = "complete"
    GNP = "gnp"
    NORMAL = "normal"
    BARABASI_ALBERT = "ba"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    kind: GraphKind
    n_nodes: int
    p: float = 0.5
    m_attach: int = 3
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", GraphKind(self.kind))
        if self.n_nodes < 2:
            raise ConfigError("n_nodes must be at least 2")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}")
        if self.kind is GraphKind.BARABASI_ALBERT and not 1 <= self.m_attach < self.n_nodes:
            raise ConfigError("m_attach must satisfy 1 <= m_attach < n_nodes")

    def with_seed(self, seed) -> GeneratorConfig:
        return GeneratorConfig(self.kind, self.n_nodes, self.p, self.m_attach, seed)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.default_rng(seed)


def open_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform(0, 1) draws with exact zeros redrawn."""
    x = rng.random(size)
    bad = np.flatnonzero(x == 0.0)
    while bad.size:
        x[bad] = rng.random(bad.size)
        bad = bad[x[bad] == 0.0]
    return x


def _pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    u, v = np.triu_indices(n, k=1)
    return u, v


def _build(n, u, v, w, coords=None) -> WeightedGraph:
    if not (np.all(u < v) and np.all(w > 0) and np.all(np.isfinite(w))):
        raise ConfigError("generated weights must be positive and finite")
    return WeightedGraph._trusted(n, u.astype(np.int64), v.astype(np.int64), w, coords=coords)


def gen_complete(cfg: GeneratorConfig) -> WeightedGraph:
    rng = _rng(cfg.seed)
    u, v = _pairs(cfg.n_nodes)
    return _build(cfg.n_nodes, u, v, open_uniform(rng, u.size))


def gen_gnp(cfg: GeneratorConfig) -> WeightedGraph:
    rng = _rng(cfg.seed)
    u, v = _pairs(cfg.n_nodes)
    w = open_uniform(rng, u.size)
    keep = rng.random(u.size) < cfg.p
    return _build(cfg.n_nodes, u[keep], v[keep], w[keep])


def gen_normal(cfg: GeneratorConfig, coords=None) -> WeightedGraph:
    """Complete graph on standard bivariate normal points, weighted by distance.

    ``coords`` overrides the random positions (used for testing geometry).
    """
    n = cfg.n_nodes
    if coords is None:
        xy = _rng(cfg.seed).standard_normal((n, 2))
    else:
        xy = np.asarray(coords, dtype=float)
        if xy.shape != (n, 2):
            raise ConfigError(f"coords must have shape ({n}, 2)")
    u, v = _pairs(n)
    w = np.hypot(xy[u, 0] - xy[v, 0], xy[u, 1] - xy[v, 1])
    return _build(n, u, v, w, coords=tuple(map(tuple, xy.tolist())))


def gen_ba(cfg: GeneratorConfig) -> WeightedGraph:
    """Preferential attachment grown from a clique on ``m_attach`` nodes.

    Each arriving node links to ``m_attach`` distinct existing nodes chosen
    sequentially with probability proportional to their current degree.
    """
    rng = _rng(cfg.seed)
    m, n = cfg.m_attach, cfg.n_nodes
    pairs: list[tuple[int, int]] = [(a, b) for a in range(m) for b in range(a + 1, m)]
    deg = np.zeros(n)
    for a, b in pairs:
        deg[a] += 1
        deg[b] += 1
    for new in range(m, n):
        weights = deg[:new].copy()
        if weights.sum() == 0:
            weights[:] = 1.0
        targets = weighted_draw_without_replacement(rng, weights, m)
        for t in sorted(targets):
            pairs.append((t, new))
            deg[t] += 1
            deg[new] += 1
    w = open_uniform(rng, len(pairs))
    u = np.array([a for a, _ in pairs], dtype=int)
    v = np.array([b for _, b in pairs], dtype=int)
    return _build(n, u, v, w)


_DISPATCH = {
    GraphKind.COMPLETE: gen_complete,
    GraphKind.GNP: gen_gnp,
    GraphKind.NORMAL: gen_normal,
    GraphKind.BARABASI_ALBERT: gen_ba,
}


def generate(cfg: GeneratorConfig) -> WeightedGraph:
    return _DISPATCH[cfg.kind](cfg)


def expected_edge_count(cfg: GeneratorConfig) -> float:
    total = math.comb(cfg.n_nodes, 2)
    if cfg.kind is GraphKind.GNP:
        return total * cfg.p
    if cfg.kind is GraphKind.BARABASI_ALBERT:
        return math.comb(cfg.m_attach, 2) + cfg.m_attach * (cfg.n_nodes - cfg.m_attach)
    return total
