from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from typing import BinaryIO

import numpy as np

from ..graph import CandidateSubgraph, Graph, ParseError, _read_bytes

MIN_CANDIDATE_SIZE = 3


class Method(str, enum.Enum):
    SLASHBURN = "slashburn"
    KCBC = "kcbc"
    LOUVAIN = "louvain"
    SPECTRAL = "spectral"
    MULTILEVEL = "multilevel"

    def __str__(self) -> str:
        return self.value


PARTITION_METHODS = (Method.LOUVAIN, Method.SPECTRAL, Method.MULTILEVEL)


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residual norm {residual:.3g})")


@dataclass(frozen=True)
class DecomposerConfig:
    """Settings shared by all decomposers; each reads the fields it needs.

    ``cluster_count=None`` means ``ceil(n / 100)`` clamped to ``[2, 500]``.
    """

    method: Method = Method.KCBC
    hub_fraction: float = 0.005
    cluster_count: int | None = None
    resolution: float = 1e-4
    seed: int = 0
    max_iterations: int = 10_000
    eigensolver: str = "auto"
    eig_tol: float = 1e-8
    eig_max_sweeps: int = 5000
    kmeans_restarts: int = 10
    balance_tolerance: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not self.resolution > 0:
            raise ValueError("resolution must be positive")
        if not 0 < self.hub_fraction <= 1:
            raise ValueError("hub_fraction must lie in (0, 1]")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.cluster_count is not None and self.cluster_count < 2 and self.method in (
            Method.SPECTRAL,
            Method.MULTILEVEL,
        ):
            raise ValueError("cluster_count must be >= 2 for spectral and multilevel")
        if self.eigensolver not in ("auto", "dense", "lanczos", "orthogonal"):
            raise ValueError(f"unknown eigensolver {self.eigensolver!r}")

    def clusters_for(self, n: int) -> int:
        if self.cluster_count is not None:
            return self.cluster_count
        return min(500, max(2, math.ceil(n / 100)))


@dataclass(frozen=True)
class Partition:
    """Non-overlapping community assignment with dense ids ``0..k-1``."""

    assignment: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        if a.size:
            present = np.unique(a)
            if present[0] != 0 or present[-1] != len(present) - 1:
                raise ValueError("community ids must be dense 0..k-1")
        a.flags.writeable = False
        object.__setattr__(self, "assignment", a)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Densify arbitrary labels in order of first appearance."""
        labels = np.asarray(labels)
        if not labels.size:
            return cls(np.empty(0, dtype=np.int64))
        _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(len(first))
        return cls(rank[inverse.reshape(-1)])

    @property
    def community_count(self) -> int:
        return int(self.assignment.max()) + 1 if self.assignment.size else 0

    def communities(self) -> list[np.ndarray]:
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.flatnonzero(np.diff(self.assignment[order])) + 1
        return np.split(order, bounds) if self.assignment.size else []

    def __len__(self) -> int:
        return len(self.assignment)


def partition_to_candidates(p: Partition, g: Graph, method: str = "partition") -> list[CandidateSubgraph]:
    """One candidate per community of at least three nodes."""
    if len(p) != g.n:
        raise ValueError("partition does not match the graph")
    return [
        CandidateSubgraph.of(c.tolist(), method, 0)
        for c in p.communities()
        if len(c) >= MIN_CANDIDATE_SIZE
    ]


def ingest_partition_file(source: bytes | str | os.PathLike | BinaryIO, g: Graph) -> Partition:
    """Read one community id per line; line ``i`` belongs to internal node ``i``.

    This is the format METIS writes, so external partitions can be compared
    with the built-in decomposers.
    """
    text = _read_bytes(source).decode("utf-8", errors="replace")
    ids = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        try:
            ids.append(int(s.split()[0]))
        except ValueError:
            raise ParseError(f"non-integer community id {s!r}", lineno) from None
    if len(ids) != g.n:
        raise ParseError(f"partition has {len(ids)} entries for a graph of {g.n} nodes")
    return Partition.from_labels(np.asarray(ids, dtype=np.int64))


def modularity(g: Graph, p: Partition, resolution: float = 1.0) -> float:
    """Q = sum_c [e_c / m - resolution * (d_c / 2m)^2]."""
    if g.m == 0:
        return 0.0
    a = p.assignment
    e = g.edge_array
    inside = np.bincount(a[e[:, 0]][a[e[:, 0]] == a[e[:, 1]]], minlength=p.community_count)
    deg = np.bincount(a, weights=g.degrees, minlength=p.community_count)
    m = g.m
    return float((inside / m).sum() - resolution * ((deg / (2 * m)) ** 2).sum())


def cut_size(g: Graph, p: Partition) -> int:
    e = g.edge_array
    return int((p.assignment[e[:, 0]] != p.assignment[e[:, 1]]).sum())
