"""JSON run configuration for ``mstinfer simulate``.

Example::

    {
      "master_seed": 7,
      "replications": 1000,
      "bootstraps": 100,
      "out_dir": "results",
      "experiments": [
        {"name": "complete",
         "generator": {"kind": "complete", "n_nodes": 100},
         "designs": ["uniform", "near", "far", "random_walk"],
         "n": [25, 50, 75]},
        {"name": "normal",
         "generator": {"kind": "normal", "n_nodes": 100},
         "designs": [{"kind": "quadrant", "quadrants": ["I", "II"]}]},
        {"name": "hiv", "input": "edges.csv", "threshold": 0.015, "ordering_seed": 1,
         "designs": ["uniform"], "n": [147, 294, 441]}
      ]
    }

Relative ``input`` paths resolve against the config file's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .generators import ConfigError, GeneratorConfig, GraphKind
from .ingest import DEFAULT_THRESHOLD
from .sampling import SampleDesign, SampleKind, SamplingError


@dataclass(frozen=True)
class ExperimentBlock:
    name: str
    designs: tuple[SampleDesign, ...]
    sizes: tuple[int, ...]
    replications: int
    bootstraps: int
    generator: GeneratorConfig | None = None
    input: Path | None = None
    threshold: float = DEFAULT_THRESHOLD
    zero_policy: str = "after_filter"
    ordering_seed: int = 0
    uniform_bootstrap: bool = False


@dataclass(frozen=True)
class RunConfig:
    master_seed: int
    out_dir: Path
    experiments: tuple[ExperimentBlock, ...]
    raw: dict = field(default_factory=dict, compare=False, repr=False)


def _int(d: dict, key: str, default=None, minimum: int = 0) -> int:
    value = d.get(key, default)
    if value is None:
        raise ConfigError(f"missing required field {key!r}")
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key!r} must be an integer")
    if value < minimum:
        raise ConfigError(f"{key!r} must be >= {minimum}")
    return value


def _design(spec: Any) -> SampleDesign:
    if isinstance(spec, str):
        spec = {"kind": spec}
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"bad design {spec!r}")
    unknown = set(spec) - {"kind", "quadrants", "neighbor_score", "on_revisit"}
    if unknown:
        raise ConfigError(f"unknown design fields {sorted(unknown)}")
    try:
        return SampleDesign(
            SampleKind(spec["kind"]),
            quadrants=frozenset(spec.get("quadrants", ())),
            neighbor_score=spec.get("neighbor_score", "edge"),
            on_revisit=spec.get("on_revisit", "restart"),
        )
    except (ValueError, SamplingError) as exc:
        raise ConfigError(str(exc)) from None


def _block(d: dict, i: int, top: dict, base: Path, overrides: dict) -> ExperimentBlock:
    if not isinstance(d, dict):
        raise ConfigError(f"experiment {i} must be an object")
    if ("generator" in d) == ("input" in d):
        raise ConfigError(f"experiment {i}: give exactly one of 'generator' or 'input'")
    designs = tuple(_design(x) for x in d.get("designs", ["uniform"]))
    if not designs:
        raise ConfigError(f"experiment {i}: no designs")
    needs_n = any(x.kind is not SampleKind.QUADRANT for x in designs)
    sizes = d.get("n", [])
    if isinstance(sizes, int):
        sizes = [sizes]
    if needs_n and not sizes:
        raise ConfigError(f"experiment {i}: 'n' is required for non-quadrant designs")
    if any(isinstance(s, bool) or not isinstance(s, int) or s < 0 for s in sizes):
        raise ConfigError(f"experiment {i}: 'n' must be non-negative integers")
    reps = overrides.get("replications") or _int(d, "replications", top.get("replications", 1000), 1)
    boots = overrides.get("bootstraps")
    if boots is None:
        boots = _int(d, "bootstraps", top.get("bootstraps", 100), 0)
    common = dict(
        designs=designs,
        sizes=tuple(sizes),
        replications=reps,
        bootstraps=boots,
        uniform_bootstrap=bool(d.get("uniform_bootstrap", top.get("uniform_bootstrap", False))),
    )
    if "generator" in d:
        gd = d["generator"]
        if not isinstance(gd, dict):
            raise ConfigError(f"experiment {i}: 'generator' must be an object")
        unknown = set(gd) - {"kind", "n_nodes", "p", "m_attach"}
        if unknown:
            raise ConfigError(f"experiment {i}: unknown generator fields {sorted(unknown)}")
        try:
            gen = GeneratorConfig(GraphKind(gd.get("kind")), _int(gd, "n_nodes", None, 2),
                                  p=float(gd.get("p", 0.5)), m_attach=int(gd.get("m_attach", 3)))
        except ValueError as exc:
            raise ConfigError(f"experiment {i}: {exc}") from None
        for s in sizes:
            if s > gen.n_nodes:
                raise ConfigError(f"experiment {i}: n={s} exceeds n_nodes={gen.n_nodes}")
        return ExperimentBlock(name=d.get("name", gen.kind.value), generator=gen, **common)
    path = Path(d["input"])
    if not path.is_absolute():
        path = base / path
    if not path.is_file():
        raise ConfigError(f"experiment {i}: input file {path} does not exist")
    threshold = overrides.get("threshold") or float(d.get("threshold", DEFAULT_THRESHOLD))
    zero_policy = d.get("zero_policy", "after_filter")
    if zero_policy not in ("after_filter", "before_filter"):
        raise ConfigError(f"experiment {i}: unknown zero_policy {zero_policy!r}")
    return ExperimentBlock(
        name=d.get("name", path.stem), input=path, threshold=threshold, zero_policy=zero_policy,
        ordering_seed=_int(d, "ordering_seed", 0), **common,
    )


def parse_config(data: dict, base: Path = Path("."), **overrides) -> RunConfig:
    """Validate a config document; keyword overrides win over file fields."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    overrides = {k: v for k, v in overrides.items() if v is not None}
    seed = overrides.get("master_seed")
    if seed is None:
        seed = _int(data, "master_seed")
    exps = data.get("experiments")
    if not isinstance(exps, list) or not exps:
        raise ConfigError("'experiments' must be a non-empty list")
    blocks = tuple(_block(d, i, data, base, overrides) for i, d in enumerate(exps))
    names = [b.name for b in blocks]
    if len(set(names)) != len(names):
        raise ConfigError(f"experiment names must be unique, got {names}")
    out_dir = Path(overrides.get("out_dir") or data.get("out_dir", "results"))
    raw = dict(data)
    raw["master_seed"] = seed
    for k in ("replications", "bootstraps", "threshold"):
        if k in overrides:
            raw[f"override_{k}"] = overrides[k]
    return RunConfig(master_seed=seed, out_dir=out_dir, experiments=blocks, raw=raw)


def load_config(path, **overrides) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    return parse_config(data, base=path.parent, **overrides)
