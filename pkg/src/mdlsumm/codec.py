"""Description-length arithmetic. All costs are in bits (base-2 logs).

The error matrix is coded in two parts, as in VoG: the *modeled* area (cells
asserted by at least one structure, where errors are missing edges) and the
*unmodeled* area (all other cells, where errors are the edges themselves).
Each part uses the same prefix code as the overlap matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, cell_count
from .structures import KINDS, Kind, Structure

LOG2_C0 = math.log2(2.865064)
VOCABULARY_SIZE = len(KINDS)


def universal_int_cost(z: int) -> float:
    """Rissanen's universal code length L_N(z) for an integer ``z >= 1``."""
    if z < 1:
        raise ValueError(f"universal code needs z >= 1, got {z}")
    return _ln(int(z))


@lru_cache(maxsize=65536)
def _ln(z: int) -> float:
    bits = LOG2_C0
    x = float(z)
    while True:
        x = math.log2(x)
        if x <= 0:
            return bits
        bits += x


def binomial_cost(n: int, k: int) -> float:
    """log2 C(n, k) through log-gamma."""
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"binomial_cost needs 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return 0.0
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)


def prefix_code_cost(present: int, universe: int) -> float:
    """Bits for a binary matrix of ``universe`` cells with ``present`` ones.

    ``log2(present + 1)`` for the count, then optimal prefix codes for the
    present and missing cells. An all-zero matrix is free.
    """
    if present < 0 or present > universe:
        raise ValueError(f"{present} present cells in a universe of {universe}")
    if present == 0:
        return 0.0
    missing = universe - present
    bits = math.log2(present + 1) + present * math.log2(universe / present)
    if missing:
        bits += missing * math.log2(universe / missing)
    return bits


@dataclass(frozen=True)
class ErrorMatrix:
    """Cells where the model's adjacency disagrees with the graph."""

    error_cells: frozenset
    universe_size: int

    def __post_init__(self):
        if len(self.error_cells) > self.universe_size:
            raise ValueError("more error cells than the universe holds")


@dataclass(frozen=True)
class OverlapMatrix:
    """Cells explained by two or more structures, with their cover counts."""

    entries: dict
    universe_size: int

    def __post_init__(self):
        for cell, count in self.entries.items():
            if count < 2:
                raise ValueError(f"overlap entry {cell} has count {count} < 2")
        if len(self.entries) > self.universe_size:
            raise ValueError("more overlap entries than the universe holds")


def error_cost(e: ErrorMatrix) -> float:
    return prefix_code_cost(len(e.error_cells), e.universe_size)


def overlap_cost(o: OverlapMatrix) -> float:
    """L(O): position code for the overlapping cells plus L_N of each count."""
    return overlap_cost_from_counts(o.entries.values(), o.universe_size)


def overlap_cost_from_counts(counts: Iterable[int], universe: int) -> float:
    counts = list(counts)
    if any(c < 2 for c in counts):
        raise ValueError("overlap counts must be >= 2")
    return prefix_code_cost(len(counts), universe) + sum(_ln(int(c)) for c in counts)


def structure_cost(s: Structure, n: int) -> float:
    """L(s): bits to identify the structure's type-specific node layout in an n-node graph."""
    size = len(s)
    if size > n or max(s.nodes) >= n:
        raise ValueError(f"structure with {size} nodes does not fit a {n}-node graph")
    k = s.kind
    if k is Kind.FULL_CLIQUE:
        return _ln(size) + binomial_cost(n, size)
    if k is Kind.STAR:
        spokes = len(s.spokes)
        return _ln(spokes) + math.log2(n) + binomial_cost(n - 1, spokes)
    if k is Kind.BIPARTITE_CORE:
        a, b = len(s.parts[0]), len(s.parts[1])
        return _ln(a) + _ln(b) + binomial_cost(n, a) + binomial_cost(n - a, b)
    return _ln(size - 1) + sum(math.log2(n - i) for i in range(size))


def model_cost(structures: Sequence[Structure], n: int) -> float:
    """L(M): model size, per-type counts, then each structure."""
    count = len(structures)
    bits = _ln(count + 1) + binomial_cost(count + VOCABULARY_SIZE - 1, VOCABULARY_SIZE - 1)
    return bits + sum(structure_cost(s, n) for s in structures)


def null_cost(edge_count: int, area: int) -> float:
    """Bits to transmit ``edge_count`` edges among ``area`` cells with no structure."""
    return _ln(edge_count + 1) + binomial_cost(area, edge_count)


@dataclass(frozen=True)
class CostBreakdown:
    model_bits: float
    error_bits: float
    overlap_bits: float = 0.0

    @property
    def total_bits(self) -> float:
        return self.model_bits + self.error_bits + self.overlap_bits

    def as_dict(self) -> dict[str, float]:
        return {
            "total_bits": self.total_bits,
            "model_bits": self.model_bits,
            "error_bits": self.error_bits,
            "overlap_bits": self.overlap_bits,
        }


def split_error_cost(universe: int, covered: int, covered_edges: int, m: int) -> float:
    """L(E) given the modeled area size and how many graph edges fall inside it."""
    modeled_errors = covered - covered_edges
    unmodeled_errors = m - covered_edges
    return prefix_code_cost(modeled_errors, covered) + prefix_code_cost(unmodeled_errors, universe - covered)


def total_cost(g: Graph, structures: Sequence[Structure], overlap_aware: bool = False) -> CostBreakdown:
    """L(G, M) from scratch: builds the cover counts of every cell the model asserts."""
    n, universe = g.n, cell_count(g.n)
    lm = model_cost(structures, n)
    if structures:
        keys = np.concatenate([s.cell_keys(n) for s in structures])
        cells, counts = np.unique(keys, return_counts=True)
    else:
        cells = counts = np.empty(0, dtype=np.int64)
    covered = len(cells)
    covered_edges = int(np.isin(cells, g.edge_keys, assume_unique=True).sum()) if covered else 0
    le = split_error_cost(universe, covered, covered_edges, g.m)
    lo = overlap_cost_from_counts(counts[counts >= 2].tolist(), universe) if overlap_aware else 0.0
    return CostBreakdown(lm, le, lo)


def standalone_benefit(g: Graph, s: Structure) -> float:
    """Bits saved when ``s`` alone is added to the empty model of ``g``."""
    n, universe = g.n, cell_count(g.n)
    keys = s.cell_keys(n)
    inside = int(np.isin(keys, g.edge_keys, assume_unique=True).sum())
    empty = model_cost([], n) + prefix_code_cost(g.m, universe)
    single = model_cost([s], n) + split_error_cost(universe, len(keys), inside, g.m)
    return empty - single


def error_matrix(g: Graph, structures: Sequence[Structure]) -> ErrorMatrix:
    """Symmetric difference between model-implied cells and graph edges."""
    implied = set()
    for s in structures:
        implied.update(s.cell_keys(g.n).tolist())
    return ErrorMatrix(frozenset(implied.symmetric_difference(g.edge_keys.tolist())), cell_count(g.n))


def overlap_matrix(g: Graph, structures: Sequence[Structure]) -> OverlapMatrix:
    counts: dict[int, int] = {}
    for s in structures:
        for key in s.cell_keys(g.n).tolist():
            counts[key] = counts.get(key, 0) + 1
    return OverlapMatrix({k: c for k, c in counts.items() if c >= 2}, cell_count(g.n))
