"""How much of a population's minimum spanning tree a sample reveals.

Core pieces: weighted graphs (:mod:`.graph`), Kruskal MSF and brute-force
oracles (:mod:`.mst`), random graph generators, node sampling designs, the
replication harness (:mod:`.experiment`) and edgelist ingestion.
"""

__version__ = "0.1.0"

from .experiment import (
    ExperimentConfig,
    ReplicationResult,
    SummaryStats,
    auc,
    bootstrap_size,
    ppv,
    run_experiment,
    run_replication,
    summarize,
)
from .generators import GeneratorConfig, GraphKind, generate
from .graph import Edge, GraphError, NodeSubset, WeightedGraph, components, induced_subgraph
from .ingest import load_edgelist, preprocess, preprocess_with_report
from .mst import EdgeOrdering, Forest, enumerate_msts, exchange_witness, msf, verify_npv, weight_ordering
from .sampling import SampleDesign, SampleKind, sample

__all__ = [
    "Edge", "EdgeOrdering", "ExperimentConfig", "Forest", "GeneratorConfig", "GraphError", "GraphKind",
    "NodeSubset", "ReplicationResult", "SampleDesign", "SampleKind", "SummaryStats", "WeightedGraph",
    "auc", "bootstrap_size", "components", "enumerate_msts", "exchange_witness", "generate",
    "induced_subgraph", "load_edgelist", "msf", "ppv", "preprocess", "preprocess_with_report",
    "run_experiment", "run_replication", "sample", "summarize", "verify_npv", "weight_ordering",
]
