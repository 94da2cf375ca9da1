"""Edgelist loading and the genetic-distance preprocessing pipeline.

Edgelist format: UTF-8 CSV with columns ``id_a,id_b,distance`` and optionally
``region_a,region_b`` giving each endpoint's region label (for example a
three-digit zip prefix). A header row is recognised by a non-numeric third
field. Distances are fractions, so 1.5% is ``0.015``.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable

from .experiment import ppv
from .graph import GraphError, NodeSubset, WeightedGraph, count_components, induced_subgraph
from .mst import EdgeOrdering, msf, weight_ordering

DEFAULT_THRESHOLD = 0.015


class EdgelistError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class EdgelistRecord:
    id_a: str
    id_b: str
    distance: float
    region_a: str | None = None
    region_b: str | None = None


@dataclass(frozen=True)
class PreprocessReport:
    input_nodes: int
    input_edges: int
    dropped_edges: int
    removed_isolates: int
    imputed_zeros: int
    imputed_value: float | None
    nodes: int
    edges: int
    components: int
    threshold: float
    zero_policy: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def parse_edgelist(lines: Iterable[str]) -> list[EdgelistRecord]:
    records = []
    seen: dict[frozenset, int] = {}
    for lineno, row in enumerate(csv.reader(lines), 1):
        if not row or all(not c.strip() for c in row):
            continue
        row = [c.strip() for c in row]
        if len(row) not in (3, 5):
            raise EdgelistError(f"expected 3 or 5 columns, got {len(row)}", lineno)
        if not _is_number(row[2]):
            if not records and not seen:
                continue  # header
            raise EdgelistError(f"distance {row[2]!r} is not a number", lineno)
        a, b = row[0], row[1]
        if not a or not b:
            raise EdgelistError("empty node id", lineno)
        if a == b:
            raise EdgelistError(f"self-loop on {a!r}", lineno)
        d = float(row[2])
        if not math.isfinite(d) or d < 0:
            raise EdgelistError(f"distance must be finite and non-negative, got {row[2]!r}", lineno)
        pair = frozenset((a, b))
        if pair in seen:
            raise EdgelistError(f"duplicate pair {a!r}-{b!r} (first on line {seen[pair]})", lineno)
        seen[pair] = lineno
        ra = rb = None
        if len(row) == 5:
            ra, rb = row[3] or None, row[4] or None
        records.append(EdgelistRecord(a, b, d, ra, rb))
    return records


def load_edgelist(path) -> list[EdgelistRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_edgelist(fh)


def _regions(records: list[EdgelistRecord]) -> dict[str, str]:
    out: dict[str, str] = {}
    for r in records:
        for node, label in ((r.id_a, r.region_a), (r.id_b, r.region_b)):
            if label is None:
                continue
            if out.setdefault(node, label) != label:
                raise EdgelistError(f"node {node!r} has conflicting regions {out[node]!r} and {label!r}")
    return out


def preprocess_with_report(
    records: list[EdgelistRecord],
    threshold: float = DEFAULT_THRESHOLD,
    zero_policy: str = "after_filter",
) -> tuple[WeightedGraph, PreprocessReport]:
    """Threshold edges, drop isolated nodes and impute zero distances.

    Zero distances become half the minimum positive distance, taken over the
    retained edges (``zero_policy="after_filter"``) or over all input edges
    (``"before_filter"``). Nodes are numbered in order of first appearance.
    """
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    if zero_policy not in ("after_filter", "before_filter"):
        raise ValueError(f"unknown zero_policy {zero_policy!r}")
    all_nodes = {n for r in records for n in (r.id_a, r.id_b)}
    kept = [r for r in records if r.distance <= threshold]
    pool = records if zero_policy == "before_filter" else kept
    positive = [r.distance for r in pool if r.distance > 0]
    zeros = sum(1 for r in kept if r.distance == 0)
    fill = min(positive) / 2 if positive else None
    if zeros and fill is None:
        raise EdgelistError("cannot impute zero distances: no positive distance available")

    index: dict[str, int] = {}
    for r in kept:
        for node in (r.id_a, r.id_b):
            index.setdefault(node, len(index))
    edges = [(index[r.id_a], index[r.id_b], r.distance if r.distance > 0 else fill) for r in kept]
    regions = _regions(records)
    names = tuple(index)
    g = WeightedGraph(
        len(names),
        tuple(edges),
        region=tuple(regions.get(n) for n in names) if regions else None,
        names=names,
    )
    if not edges:
        warnings.warn("preprocessing removed every edge; the graph is empty", stacklevel=2)
    report = PreprocessReport(
        input_nodes=len(all_nodes),
        input_edges=len(records),
        dropped_edges=len(records) - len(kept),
        removed_isolates=len(all_nodes) - len(names),
        imputed_zeros=zeros,
        imputed_value=fill if zeros else None,
        nodes=g.n_nodes,
        edges=g.n_edges,
        components=count_components(g),
        threshold=threshold,
        zero_policy=zero_policy,
    )
    return g, report


def preprocess(records, threshold: float = DEFAULT_THRESHOLD, zero_policy: str = "after_filter") -> WeightedGraph:
    return preprocess_with_report(records, threshold, zero_policy)[0]


def graph_to_records(g: WeightedGraph) -> list[EdgelistRecord]:
    names = g.names if g.names is not None else tuple(str(x) for x in g.labels)
    region = g.region or (None,) * g.n_nodes
    return [EdgelistRecord(names[u], names[v], w, region[u], region[v]) for u, v, w in g.edges]


def write_edgelist(path, records: Iterable[EdgelistRecord]) -> None:
    records = list(records)
    with_regions = any(r.region_a is not None or r.region_b is not None for r in records)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        header = ["id_a", "id_b", "distance"] + (["region_a", "region_b"] if with_regions else [])
        w.writerow(header)
        for r in records:
            row = [r.id_a, r.id_b, repr(r.distance)]
            if with_regions:
                row += [r.region_a or "", r.region_b or ""]
            w.writerow(row)


def fixed_ordering(g: WeightedGraph, seed) -> EdgeOrdering:
    """The one tie-breaking ordering shared by a whole analysis of ``g``."""
    return weight_ordering(g, seed)


def save_ordering(path, g: WeightedGraph, ordering: EdgeOrdering) -> None:
    names = g.names if g.names is not None else tuple(str(x) for x in g.labels)
    seq = [[names[g.edges[i].u], names[g.edges[i].v]] for i in ordering.sequence]
    Path(path).write_text(json.dumps({"sequence": seq}, indent=1), encoding="utf-8")


def load_ordering(path, g: WeightedGraph) -> EdgeOrdering:
    names = g.names if g.names is not None else tuple(str(x) for x in g.labels)
    pos = {name: i for i, name in enumerate(names)}
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        seq = [g.find_edge(pos[a], pos[b]) for a, b in data["sequence"]]
    except KeyError as exc:
        raise GraphError(f"ordering references unknown node {exc}") from None
    ordering = EdgeOrdering.from_sequence(seq)
    if len(ordering) != g.n_edges or not ordering.is_weight_consistent(g):
        raise GraphError("stored ordering does not match the graph")
    return ordering


def subset_by_region(g: WeightedGraph, region_label: str) -> NodeSubset:
    if g.region is None:
        return NodeSubset(frozenset())
    return NodeSubset.from_order([v for v, r in enumerate(g.region) if r == region_label])


def region_overlap(g: WeightedGraph, ordering: EdgeOrdering, region_label: str) -> tuple[int, float | None]:
    """Node count of a region and the share of its MSF edges in the population MSF."""
    s = subset_by_region(g, region_label)
    h = induced_subgraph(g, s)
    return len(s), ppv(msf(g, ordering), msf(h, ordering.restrict(h)))


def region_counts(g: WeightedGraph) -> dict[str, int]:
    counts: dict[str, int] = {}
    for r in g.region or ():
        if r is not None:
            counts[r] = counts.get(r, 0) + 1
    return dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))
