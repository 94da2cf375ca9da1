"""Replication pipeline: population MSF, sample MSF, PPV, bootstrap PPV and AUC."""

from __future__ import annotations

import bisect
import math
import statistics
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import seeding
from .generators import GeneratorConfig, GraphKind, generate
from .graph import WeightedGraph, induced_subgraph
from .mst import EdgeOrdering, Forest, msf, verify_npv, weight_ordering
from .sampling import SampleDesign, SampleKind, sample

Z975 = statistics.NormalDist().inv_cdf(0.975)


class ExperimentError(ValueError):
    pass


class NPVViolation(AssertionError):
    pass


@dataclass(frozen=True)
class ReplicationResult:
    index: int
    ppv: float | None
    bppv_mean: float | None
    auc: float | None
    t_pop: int
    t_sample: int
    e_sample: int
    k_pop: int
    k_sample: int
    n_sampled: int
    n_nodes: int

    @property
    def sampled_fraction(self) -> float:
        return self.n_sampled / self.n_nodes


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    ci_low: float
    ci_high: float
    n_defined: int


@dataclass(frozen=True)
class ExperimentConfig:
    """One simulation cell: a population source, a sampling design and a size.

    Exactly one of ``generator`` (a fresh graph per replication) or ``graph``
    (the same graph every replication) is set. ``ordering`` fixes the tie
    breaking for a supplied graph; otherwise it is derived from the master seed.
    """

    design: SampleDesign
    replications: int = 1000
    bootstraps: int = 100
    master_seed: int = 0
    generator: GeneratorConfig | None = None
    graph: WeightedGraph | None = field(default=None, repr=False)
    ordering: EdgeOrdering | None = field(default=None, repr=False)
    uniform_bootstrap: bool = False
    check_npv: bool = True

    def __post_init__(self):
        if (self.generator is None) == (self.graph is None):
            raise ExperimentError("set exactly one of generator or graph")
        if self.replications < 1:
            raise ExperimentError("replications must be at least 1")
        if self.bootstraps < 0:
            raise ExperimentError("bootstraps must be non-negative")
        if self.master_seed < 0:
            raise ExperimentError("master_seed must be non-negative")


def _keys(f) -> frozenset:
    return f.keys if isinstance(f, Forest) else frozenset(f)


def ppv(t_pop, t_sample) -> float | None:
    """Share of sample-forest edges that are also population-forest edges."""
    sample_keys = _keys(t_sample)
    if not sample_keys:
        return None
    return len(_keys(t_pop) & sample_keys) / len(sample_keys)


def bootstrap_size(n: int, N: int) -> int:
    """``n**2 / N`` rounded to the nearest integer, halves away from zero."""
    if N <= 0:
        raise ExperimentError("population size must be positive")
    return (2 * n * n + N) // (2 * N)


def bootstrap_round(
    h: WeightedGraph,
    n: int,
    N: int,
    design_kind,
    seed,
    ordering: EdgeOrdering | None = None,
    neighbor_score: str = "edge",
    on_revisit: str = "restart",
) -> Forest:
    """MSF of a resample of ``n**2/N`` nodes drawn from the sample graph ``h``."""
    size = bootstrap_size(n, N)
    if size > h.n_nodes:
        raise ExperimentError(f"bootstrap size {size} exceeds the {h.n_nodes} sampled nodes")
    if ordering is None:
        ordering = weight_ordering(h, seed)
    design = SampleDesign(design_kind, n=size, seed=seed,
                          neighbor_score=neighbor_score, on_revisit=on_revisit)
    hb = induced_subgraph(h, sample(h, design))
    return msf(hb, ordering.restrict(hb))


def auc(scores: Sequence[float], labels: Sequence[bool]) -> float | None:
    """Mann-Whitney AUC: P(positive outscores negative), ties counted half."""
    if len(scores) != len(labels):
        raise ExperimentError("scores and labels differ in length")
    pos = [s for s, y in zip(scores, labels) if y]
    neg = sorted(s for s, y in zip(scores, labels) if not y)
    if not pos or not neg:
        return None
    wins = ties = 0
    for s in pos:
        lo = bisect.bisect_left(neg, s)
        hi = bisect.bisect_right(neg, s)
        wins += lo
        ties += hi - lo
    return (wins + 0.5 * ties) / (len(pos) * len(neg))


def _population(cfg: ExperimentConfig, i: int) -> tuple[WeightedGraph, EdgeOrdering]:
    ms = cfg.master_seed
    if cfg.generator is not None:
        g = generate(cfg.generator.with_seed(seeding.derive(ms, i, seeding.GRAPH)))
        return g, weight_ordering(g, seeding.derive(ms, i, seeding.ORDERING))
    g = cfg.graph
    ordering = cfg.ordering
    if ordering is None:
        ordering = weight_ordering(g, seeding.derive(ms, seeding.ORDERING))
    return g, ordering


def run_replication(cfg: ExperimentConfig, i: int) -> ReplicationResult:
    ms = cfg.master_seed
    g, ordering = _population(cfg, i)
    t_pop = msf(g, ordering)
    design = cfg.design.replace(seed=seeding.derive(ms, i, seeding.SAMPLE))
    s = sample(g, design)
    h = induced_subgraph(g, s)
    h_ordering = ordering.restrict(h)
    t_h = msf(h, h_ordering)
    pop_keys = t_pop.keys
    h_tree_keys = t_h.keys
    if cfg.check_npv and not verify_npv(pop_keys, h.edge_keys, h_tree_keys):
        raise NPVViolation(f"replication {i}: population MSF edge outside the sample MSF")

    bppv_mean = auc_value = None
    if cfg.bootstraps and design.kind is not SampleKind.QUADRANT and h.n_nodes:
        kind = SampleKind.UNIFORM if cfg.uniform_bootstrap else design.kind
        counts: Counter = Counter()
        bppvs = []
        for j in range(cfg.bootstraps):
            tb = bootstrap_round(
                h, h.n_nodes, g.n_nodes, kind,
                seeding.derive(ms, i, seeding.BOOTSTRAP, j),
                ordering=h_ordering, neighbor_score=design.neighbor_score,
                on_revisit=design.on_revisit,
            )
            tb_keys = tb.keys
            counts.update(tb_keys)
            value = ppv(h_tree_keys, tb_keys)
            if value is not None:
                bppvs.append(value)
        if bppvs:
            bppv_mean = math.fsum(bppvs) / len(bppvs)
        universe = h.edge_keys
        auc_value = auc([counts[k] for k in universe], [k in pop_keys for k in universe])

    return ReplicationResult(
        index=i,
        ppv=ppv(pop_keys, h_tree_keys),
        bppv_mean=bppv_mean,
        auc=auc_value,
        t_pop=len(t_pop),
        t_sample=len(t_h),
        e_sample=h.n_edges,
        k_pop=g.n_nodes - len(t_pop),
        k_sample=h.n_nodes - len(t_h),
        n_sampled=h.n_nodes,
        n_nodes=g.n_nodes,
    )


def _run_chunk(args) -> list[ReplicationResult]:
    cfg, indices = args
    return [run_replication(cfg, i) for i in indices]


def run_experiment(
    cfg: ExperimentConfig,
    workers: int = 1,
    progress: Callable[[int], None] | None = None,
) -> list[ReplicationResult]:
    """All replications, ordered by index regardless of worker count."""
    indices = list(range(cfg.replications))
    if workers <= 1:
        out = []
        for i in indices:
            out.append(run_replication(cfg, i))
            if progress:
                progress(i)
        return out
    chunks = [indices[k::workers * 4] for k in range(min(len(indices), workers * 4))]
    results: dict[int, ReplicationResult] = {}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for batch in pool.map(_run_chunk, [(cfg, c) for c in chunks]):
            for r in batch:
                results[r.index] = r
                if progress:
                    progress(r.index)
    return [results[i] for i in indices]


STATISTICS = ("ppv", "bppv_mean", "auc")


def summarize(results: Iterable, statistic: str | Callable = "ppv") -> SummaryStats:
    """Mean with a normal-approximation 95% interval over defined values."""
    get = statistic if callable(statistic) else (lambda r: getattr(r, statistic))
    values = [v for v in map(get, results) if v is not None]
    if len(values) < 2:
        raise ExperimentError(f"need at least two defined values, got {len(values)}")
    mean = math.fsum(values) / len(values)
    var = math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1)
    half = Z975 * math.sqrt(var / len(values))
    return SummaryStats(mean, mean - half, mean + half, len(values))


def estimate_gnp_ppv_formula(N: int, n: int, p: float, trials: int, seed: int = 0) -> tuple[float, float]:
    """Monte-Carlo conditional PPV against the closed form with empirical component means.

    Returns ``(lhs, rhs)`` where ``lhs`` estimates P(e in T' | e in T_n') for a
    uniformly chosen edge slot, and ``rhs`` is
    ``(n/N) * ((n-1)/(N-1)) * (N - mean K') / (n - mean K_n')``.
    """
    if trials < 1:
        raise ExperimentError("trials must be at least 1")
    both = in_sample_tree = 0
    k_pop_total = k_sample_total = 0
    base = GeneratorConfig(GraphKind.GNP, N, p=p)
    for t in range(trials):
        g = generate(base.with_seed(seeding.derive(seed, t, seeding.GRAPH)))
        ordering = weight_ordering(g, seeding.derive(seed, t, seeding.ORDERING))
        t_pop = msf(g, ordering)
        s = sample(g, SampleDesign(SampleKind.UNIFORM, n=n, seed=seeding.derive(seed, t, seeding.SAMPLE)))
        h = induced_subgraph(g, s)
        t_h = msf(h, ordering.restrict(h))
        both += len(t_pop.edges & {h.parent_edge[j] for j in t_h.edges})
        in_sample_tree += len(t_h)
        k_pop_total += N - len(t_pop)
        k_sample_total += n - len(t_h)
    lhs = both / in_sample_tree if in_sample_tree else math.nan
    ek, ekn = k_pop_total / trials, k_sample_total / trials
    rhs = (n / N) * ((n - 1) / (N - 1)) * (N - ek) / (n - ekn) if n > ekn else math.nan
    return lhs, rhs
