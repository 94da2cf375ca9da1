"""Command-line interface: ``mstinfer {simulate,mst,sample,ingest,theorems,report}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentBlock, load_config
from .experiment import STATISTICS, ExperimentConfig, ExperimentError, run_experiment, summarize
from .generators import ConfigError, GeneratorConfig, GraphKind, generate
from .graph import components
from .ingest import (
    DEFAULT_THRESHOLD,
    EdgelistError,
    fixed_ordering,
    graph_to_records,
    load_edgelist,
    preprocess_with_report,
    region_counts,
    region_overlap,
    save_ordering,
    write_edgelist,
)
from .mst import msf
from .sampling import QUADRANTS, SampleDesign, SampleKind, SamplingError, sample
from .theorems import run_suite

log = logging.getLogger("mstinfer")

REPLICATION_COLUMNS = [
    "graph", "sampling", "n", "replication", "ppv", "bppv_mean", "auc",
    "n_sampled", "t_pop", "t_sample", "e_sample", "k_pop", "k_sample",
]
SUMMARY_COLUMNS = ["graph", "sampling", "n", "statistic", "mean", "ci_low", "ci_high", "n_defined"]


class UsageError(Exception):
    """Bad input from the user; exit status 2."""


def _fmt(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def design_label(d: SampleDesign) -> str:
    if d.kind is SampleKind.QUADRANT:
        return "quadrant:" + "+".join(q for q in QUADRANTS if q in d.quadrants)
    if d.kind is SampleKind.RANDOM_WALK and (d.neighbor_score, d.on_revisit) != ("edge", "restart"):
        return f"random_walk({d.neighbor_score},{d.on_revisit})"
    return d.kind.value


def summary_rows(graph: str, sampling: str, n: str, results) -> list[list[str]]:
    stats = list(STATISTICS)
    if sampling.startswith("quadrant"):
        stats.append("sampled_fraction")
    rows = []
    for stat in stats:
        get = (lambda r: r.sampled_fraction) if stat == "sampled_fraction" else stat
        try:
            s = summarize(results, get)
            rows.append([graph, sampling, n, stat, f"{s.mean:.6f}", f"{s.ci_low:.6f}", f"{s.ci_high:.6f}",
                         str(s.n_defined)])
        except ExperimentError:
            defined = sum(1 for r in results if (get(r) if callable(get) else getattr(r, get)) is not None)
            rows.append([graph, sampling, n, stat, "NA", "NA", "NA", str(defined)])
    return rows


def _load_graph(block: ExperimentBlock):
    records = load_edgelist(block.input)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g, report = preprocess_with_report(records, block.threshold, block.zero_policy)
    return g, report


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config, master_seed=args.seed, out_dir=args.out_dir, threshold=args.threshold,
                          replications=args.replications, bootstraps=args.bootstraps)
    except (ConfigError, EdgelistError) as exc:
        raise UsageError(str(exc)) from None
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    rep_buf, sum_buf = io.StringIO(), io.StringIO()
    rep_w = csv.writer(rep_buf, lineterminator="\n")
    sum_w = csv.writer(sum_buf, lineterminator="\n")
    rep_w.writerow(REPLICATION_COLUMNS)
    sum_w.writerow(SUMMARY_COLUMNS)
    manifest_exps = []
    for block in cfg.experiments:
        entry: dict = {"name": block.name}
        graph = ordering = None
        if block.input is not None:
            try:
                graph, report = _load_graph(block)
            except EdgelistError as exc:
                raise UsageError(f"{block.input}: {exc}") from None
            ordering = fixed_ordering(graph, block.ordering_seed)
            ord_path = out / f"{block.name}_ordering.json"
            save_ordering(ord_path, graph, ordering)
            entry.update(source=str(block.input), preprocess=json.loads(report.to_json()),
                         ordering_file=ord_path.name, ordering_seed=block.ordering_seed)
        else:
            g = block.generator
            entry.update(source="generator", kind=g.kind.value, n_nodes=g.n_nodes, p=g.p, m_attach=g.m_attach)
        cells = []
        for design in block.designs:
            sizes = [None] if design.kind is SampleKind.QUADRANT else list(block.sizes)
            for n in sizes:
                if graph is not None and n is not None and n > graph.n_nodes:
                    raise UsageError(f"{block.name}: n={n} exceeds the {graph.n_nodes} nodes after preprocessing")
                ecfg = ExperimentConfig(
                    design=design.replace(n=n or 0),
                    replications=block.replications,
                    bootstraps=block.bootstraps,
                    master_seed=cfg.master_seed,
                    generator=block.generator,
                    graph=graph,
                    ordering=ordering,
                    uniform_bootstrap=block.uniform_bootstrap,
                )
                label, n_txt = design_label(design), _fmt(n)
                log.info("running %s / %s / n=%s (%d replications)", block.name, label, n_txt, block.replications)
                t0 = time.perf_counter()
                results = run_experiment(ecfg, workers=args.workers)
                log.info("  done in %.1fs", time.perf_counter() - t0)
                for r in results:
                    rep_w.writerow([block.name, label, n_txt, r.index, _fmt(r.ppv), _fmt(r.bppv_mean), _fmt(r.auc),
                                    r.n_sampled, r.t_pop, r.t_sample, r.e_sample, r.k_pop, r.k_sample])
                for row in summary_rows(block.name, label, n_txt, results):
                    sum_w.writerow(row)
                cells.append({"sampling": label, "n": n, "replications": block.replications,
                              "bootstraps": 0 if design.kind is SampleKind.QUADRANT else block.bootstraps})
        entry["cells"] = cells
        manifest_exps.append(entry)
    (out / "replications.csv").write_text(rep_buf.getvalue(), encoding="utf-8")
    (out / "summary.csv").write_text(sum_buf.getvalue(), encoding="utf-8")
    manifest = {
        "library": "mstinfer",
        "version": __version__,
        "numpy": np.__version__,
        "master_seed": cfg.master_seed,
        "seed_derivation": "numpy PCG64(SeedSequence([master_seed, replication, stream, bootstrap]))",
        "config": cfg.raw,
        "experiments": manifest_exps,
        "outputs": ["replications.csv", "summary.csv"],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n",
                                       encoding="utf-8")
    print(sum_buf.getvalue(), end="")
    return 0


def _threshold(args) -> float:
    if getattr(args, "threshold_pct", None) is not None:
        return args.threshold_pct / 100
    return args.threshold


def _read_records(path):
    try:
        return load_edgelist(path)
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except EdgelistError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_mst(args) -> int:
    records = _read_records(args.input)
    threshold = _threshold(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g, report = preprocess_with_report(records, threshold if threshold is not None else math.inf)
    ordering = fixed_ordering(g, args.seed)
    forest = msf(g, ordering)
    comps = components(g)
    names = g.names
    pre = json.loads(report.to_json())
    if math.isinf(pre["threshold"]):
        pre["threshold"] = None  # no cut-off
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id_a", "id_b", "distance"])
    for i in sorted(forest.edges, key=ordering.rank.__getitem__):
        u, v, wt = g.edges[i]
        w.writerow([names[u], names[v], repr(wt)])
    stats = {
        "nodes": g.n_nodes,
        "edges": g.n_edges,
        "components": len(comps),
        "component_sizes": sorted((len(c) for c in comps), reverse=True),
        "msf_edges": len(forest),
        "msf_weight": math.fsum(forest.weights()),
        "seed": args.seed,
        "preprocess": pre,
    }
    stats_txt = json.dumps(stats, indent=2, sort_keys=True) + "\n"
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "msf.csv").write_text(buf.getvalue(), encoding="utf-8")
        (out / "components.json").write_text(stats_txt, encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
        sys.stderr.write(stats_txt)
    return 0


def cmd_ingest(args) -> int:
    records = _read_records(args.input)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            g, report = preprocess_with_report(records, _threshold(args), args.zero_policy)
        except EdgelistError as exc:
            raise UsageError(str(exc)) from None
    doc = json.loads(report.to_json())
    ordering = fixed_ordering(g, args.ordering_seed) if args.ordering_seed is not None else None
    if g.region is not None:
        regions = {}
        for label, count in list(region_counts(g).items())[: args.top_regions]:
            entry = {"nodes": count, "share": count / g.n_nodes}
            if ordering is not None:
                entry["msf_overlap"] = region_overlap(g, ordering, label)[1]
            regions[label] = entry
        doc["regions"] = regions
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_edgelist(out / "graph.csv", graph_to_records(g))
        (out / "report.json").write_text(text, encoding="utf-8")
        if ordering is not None:
            save_ordering(out / "ordering.json", g, ordering)
    sys.stdout.write(text)
    return 0


def cmd_sample(args) -> int:
    if (args.input is None) == (args.generator is None):
        raise UsageError("give exactly one of --input or --generator")
    if args.input is not None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            g, _ = preprocess_with_report(_read_records(args.input), _threshold(args) or DEFAULT_THRESHOLD)
    else:
        try:
            g = generate(GeneratorConfig(GraphKind(args.generator), args.nodes, p=args.p,
                                         m_attach=args.m_attach, seed=args.graph_seed))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    quadrants = frozenset(q for q in (args.quadrants or "").split(",") if q)
    try:
        design = SampleDesign(SampleKind(args.design), n=args.n, quadrants=quadrants, seed=args.seed,
                              neighbor_score=args.neighbor_score, on_revisit=args.on_revisit)
        s = sample(g, design)
    except (ValueError, SamplingError) as exc:
        raise UsageError(str(exc)) from None
    names = g.names
    for v in s.order_recorded:
        print(names[v] if names is not None else v)
    return 0


def cmd_theorems(args) -> int:
    sizes = tuple(int(x) for x in args.sizes.split(",")) if args.sizes else (4, 5, 6, 7, 8)
    if max(sizes) > 8:
        raise UsageError("enumeration checks are capped at 8 nodes")
    results = run_suite(seed=args.seed, sizes=sizes, instances=args.instances, mutate=args.mutate)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


def cmd_report(args) -> int:
    try:
        fh = open(args.replications, encoding="utf-8", newline="")
    except FileNotFoundError:
        raise UsageError(f"{args.replications}: no such file") from None
    from .experiment import ReplicationResult

    groups: dict[tuple[str, str, str], list] = {}
    with fh:
        reader = csv.DictReader(fh)
        missing = set(REPLICATION_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise UsageError(f"replications file lacks columns {sorted(missing)}")
        for row in reader:
            def num(key):
                return None if row[key] == "NA" else float(row[key])
            n_nodes = int(row["t_pop"]) + int(row["k_pop"])
            r = ReplicationResult(int(row["replication"]), num("ppv"), num("bppv_mean"), num("auc"),
                                  int(row["t_pop"]), int(row["t_sample"]), int(row["e_sample"]),
                                  int(row["k_pop"]), int(row["k_sample"]), int(row["n_sampled"]), n_nodes)
            groups.setdefault((row["graph"], row["sampling"], row["n"]), []).append(r)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for (graph, sampling, n), results in groups.items():
        for row in summary_rows(graph, sampling, n, results):
            w.writerow(row)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mstinfer", description="What a sample MST says about the population MST.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a configured simulation study")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, help="override master_seed")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out-dir")
    s.add_argument("--threshold", type=float, help="override threshold for edgelist inputs")
    s.add_argument("--replications", type=int)
    s.add_argument("--bootstraps", type=int)
    s.set_defaults(func=cmd_simulate)

    def threshold_args(sp, default):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--threshold", type=float, default=default, help="distance cut-off as a fraction")
        g.add_argument("--threshold-pct", type=float, help="distance cut-off in percent")

    m = sub.add_parser("mst", help="minimum spanning forest of an edgelist")
    m.add_argument("input")
    m.add_argument("--seed", type=int, default=0, help="tie-breaking seed")
    threshold_args(m, None)
    m.add_argument("--out-dir")
    m.set_defaults(func=cmd_mst)

    i = sub.add_parser("ingest", help="preprocess an edgelist and report what changed")
    i.add_argument("input")
    threshold_args(i, DEFAULT_THRESHOLD)
    i.add_argument("--zero-policy", choices=["after_filter", "before_filter"], default="after_filter")
    i.add_argument("--ordering-seed", type=int, help="fix a tie-breaking ordering and report region overlaps")
    i.add_argument("--top-regions", type=int, default=3)
    i.add_argument("--out-dir")
    i.set_defaults(func=cmd_ingest)

    sa = sub.add_parser("sample", help="draw a node sample and print node ids in recorded order")
    sa.add_argument("--input")
    threshold_args(sa, None)
    sa.add_argument("--generator", choices=[k.value for k in GraphKind])
    sa.add_argument("--nodes", type=int, default=100)
    sa.add_argument("--p", type=float, default=0.5)
    sa.add_argument("--m-attach", type=int, default=3)
    sa.add_argument("--graph-seed", type=int, default=0)
    sa.add_argument("--design", choices=[k.value for k in SampleKind], default="uniform")
    sa.add_argument("-n", type=int, default=0)
    sa.add_argument("--quadrants", help="comma-separated, e.g. I,II")
    sa.add_argument("--neighbor-score", choices=["edge", "strength"], default="edge")
    sa.add_argument("--on-revisit", choices=["restart", "continue"], default="restart")
    sa.add_argument("--seed", type=int, default=0)
    sa.set_defaults(func=cmd_sample)

    t = sub.add_parser("theorems", help="run the randomised MST property checks")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--sizes", help="comma-separated node counts (max 8)")
    t.add_argument("--instances", type=int, default=200)
    t.add_argument("--mutate", action="store_true", help="corrupt each sample MSF by one edge (negative control)")
    t.set_defaults(func=cmd_theorems)

    r = sub.add_parser("report", help="summarise a replications.csv")
    r.add_argument("replications")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mstinfer: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.debug("failure", exc_info=True)
        print(f"mstinfer: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
