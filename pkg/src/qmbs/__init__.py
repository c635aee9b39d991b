"""Grover-search circuits for maximum biclique problems on bipartite graphs."""

from .bigraph import (
    TOY_GRAPH,
    BipartiteGraph,
    GraphFormatError,
    brute_force_max,
    count_bicliques,
    edge_size,
    gen_synthetic,
    is_biclique,
    parse_graph,
)
from .circuit import Circuit, Gate, QubitLayout, compose, invert, layout
from .grover import SearchResult, qkbs, qmbs, qmbs_balanced, qmbs_vertex, success_probability
from .oracle import GroverPlan, TargetSpec, build_plan, iteration_count
from .sim import run_basis_tracked, run_dense, sample

__all__ = [
    "TOY_GRAPH",
    "BipartiteGraph",
    "GraphFormatError",
    "brute_force_max",
    "count_bicliques",
    "edge_size",
    "gen_synthetic",
    "is_biclique",
    "parse_graph",
    "Circuit",
    "Gate",
    "QubitLayout",
    "compose",
    "invert",
    "layout",
    "SearchResult",
    "qkbs",
    "qmbs",
    "qmbs_balanced",
    "qmbs_vertex",
    "success_probability",
    "GroverPlan",
    "TargetSpec",
    "build_plan",
    "iteration_count",
    "run_basis_tracked",
    "run_dense",
    "sample",
]

__version__ = "0.1.0"
