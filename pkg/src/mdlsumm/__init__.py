"""Graph summarization by minimum description length.

Candidate subgraphs come from one of five decomposers, each candidate is
labeled with its cheapest vocabulary structure (full clique, star,
bipartite core, chain), and a heuristic assembles the labeled structures
into a summary whose cost is measured in bits.
"""

__version__ = "0.1.0"

from .assembly import Heuristic, Model, empty_model_cost, read_model, select, select_greedy_nforget, select_top10, write_model
from .codec import CostBreakdown, model_cost, structure_cost, total_cost, universal_int_cost
from .decompose import (
    ConvergenceError,
    DecomposerConfig,
    Method,
    Partition,
    core_numbers,
    decompose,
    kcbc_decompose,
    louvain_cluster,
    multilevel_partition,
    slashburn_decompose,
    spectral_cluster,
)
from .graph import CandidateSubgraph, Graph, ParseError, load_edge_list
from .labeling import LabeledCandidate, label_all, label_subgraph
from .metrics import SummaryReport, compression_rate, coverage
from .pipeline import run
from .structures import Kind, Structure

__all__ = [
    "__version__",
    "Heuristic",
    "Model",
    "empty_model_cost",
    "read_model",
    "select",
    "select_greedy_nforget",
    "select_top10",
    "write_model",
    "CostBreakdown",
    "model_cost",
    "structure_cost",
    "total_cost",
    "universal_int_cost",
    "ConvergenceError",
    "DecomposerConfig",
    "Method",
    "Partition",
    "core_numbers",
    "decompose",
    "kcbc_decompose",
    "louvain_cluster",
    "multilevel_partition",
    "slashburn_decompose",
    "spectral_cluster",
    "CandidateSubgraph",
    "Graph",
    "ParseError",
    "load_edge_list",
    "LabeledCandidate",
    "label_all",
    "label_subgraph",
    "SummaryReport",
    "compression_rate",
    "coverage",
    "run",
    "Kind",
    "Structure",
]
