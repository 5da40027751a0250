"""Candidate-subgraph generators."""

from __future__ import annotations

from ..graph import CandidateSubgraph, Graph
from .base import (
    PARTITION_METHODS,
    ConvergenceError,
    DecomposerConfig,
    Method,
    Partition,
    cut_size,
    ingest_partition_file,
    modularity,
    partition_to_candidates,
)
from .kcore import core_numbers, kcbc_decompose
from .louvain import louvain_cluster, louvain_levels
from .multilevel import multilevel_partition
from .slashburn import slashburn_decompose
from .spectral import orthogonal_iteration, spectral_cluster

_PARTITIONERS = {
    Method.LOUVAIN: louvain_cluster,
    Method.SPECTRAL: spectral_cluster,
    Method.MULTILEVEL: multilevel_partition,
}


def decompose(g: Graph, cfg: DecomposerConfig, partition: Partition | None = None) -> list[CandidateSubgraph]:
    """Run the configured decomposer and return its candidates.

    For partition methods a precomputed ``partition`` (e.g. read from a
    file) replaces the built-in one.
    """
    method = cfg.method
    if partition is not None:
        return partition_to_candidates(partition, g, method.value)
    if method is Method.SLASHBURN:
        return slashburn_decompose(g, cfg)
    if method is Method.KCBC:
        return kcbc_decompose(g, cfg.max_iterations)
    return partition_to_candidates(_PARTITIONERS[method](g, cfg), g, method.value)


__all__ = [
    "PARTITION_METHODS",
    "ConvergenceError",
    "DecomposerConfig",
    "Method",
    "Partition",
    "core_numbers",
    "cut_size",
    "decompose",
    "ingest_partition_file",
    "kcbc_decompose",
    "louvain_cluster",
    "louvain_levels",
    "modularity",
    "multilevel_partition",
    "orthogonal_iteration",
    "partition_to_candidates",
    "slashburn_decompose",
    "spectral_cluster",
]
