"""Summary assembly: rank labeled candidates and pick a model."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .codec import (
    CostBreakdown,
    VOCABULARY_SIZE,
    _ln,
    binomial_cost,
    model_cost,
    prefix_code_cost,
    split_error_cost,
    standalone_benefit,
    structure_cost,
    total_cost,
)
from .graph import Graph, cell_count
from .labeling import LabeledCandidate
from .structures import Structure

IMPROVEMENT_EPS = 1e-9
TOP_K = 10
# Above this many cells the cover counts live in a dict instead of a dense array.
DENSE_CELL_LIMIT = 20_000_000


class Heuristic(str, enum.Enum):
    TOP10 = "top10"
    GREEDY = "greedy"

    def __str__(self) -> str:
        return self.value


@dataclass
class Model:
    structures: list[Structure] = field(default_factory=list)
    heuristic: Heuristic = Heuristic.GREEDY
    overlap_aware: bool = False

    def __len__(self) -> int:
        return len(self.structures)

    def __iter__(self):
        return iter(self.structures)


def structure_benefit(g: Graph, lc: LabeledCandidate) -> float:
    """Drop in total description length when the structure alone is modeled."""
    return standalone_benefit(g, lc.structure)


class CoverState:
    """Per-cell cover counts of a model, updated one structure at a time.

    Tracks just enough to price the model without a rebuild: the size of the
    modeled area, how many graph edges fall inside it, and the overlap entries
    (cells covered two or more times) with the sum of their count codes.
    """

    def __init__(self, g: Graph):
        self.g = g
        self.n = g.n
        self.universe = cell_count(g.n)
        self.structures: list[Structure] = []
        self.structure_bits = 0.0
        self.covered = 0
        self.covered_edges = 0
        self.overlap_cells = 0
        self.overlap_count_bits = 0.0
        self._dense = self.universe <= DENSE_CELL_LIMIT
        if self._dense:
            self._counts = np.zeros(self.universe, dtype=np.int32)
        else:
            self._counts_map: dict[int, int] = {}
        self._cache: dict[Structure, tuple[np.ndarray, np.ndarray]] = {}

    def _cells(self, s: Structure):
        hit = self._cache.get(s)
        if hit is None:
            keys = s.cell_keys(self.n)
            edge_keys = self.g.edge_keys
            pos = np.searchsorted(edge_keys, keys)
            pos[pos == len(edge_keys)] = 0
            is_edge = edge_keys[pos] == keys if len(edge_keys) else np.zeros(len(keys), dtype=bool)
            hit = self._cache[s] = (keys, is_edge)
        return hit

    def _get(self, keys: np.ndarray) -> np.ndarray:
        if self._dense:
            return self._counts[keys]
        get = self._counts_map.get
        return np.fromiter((get(k, 0) for k in keys.tolist()), dtype=np.int64, count=len(keys))

    def _put(self, keys: np.ndarray, values: np.ndarray) -> None:
        if self._dense:
            self._counts[keys] = values
            return
        cmap = self._counts_map
        for k, v in zip(keys.tolist(), values.tolist()):
            if v:
                cmap[k] = v
            else:
                cmap.pop(k, None)

    @staticmethod
    def _count_bits(counts: np.ndarray) -> float:
        """Sum of L_N over counts >= 2."""
        c = counts[counts >= 2]
        if not len(c):
            return 0.0
        vals, reps = np.unique(c, return_counts=True)
        return float(sum(_ln(int(v)) * int(r) for v, r in zip(vals, reps)))

    def add(self, s: Structure) -> None:
        keys, is_edge = self._cells(s)
        before = self._get(keys)
        after = before + 1
        fresh = before == 0
        self.covered += int(fresh.sum())
        self.covered_edges += int((fresh & is_edge).sum())
        self.overlap_cells += int((before == 1).sum())
        self.overlap_count_bits += self._count_bits(after) - self._count_bits(before)
        self._put(keys, after)
        self.structures.append(s)
        self.structure_bits += structure_cost(s, self.n)

    def remove(self, s: Structure) -> None:
        """Undo :meth:`add` for ``s`` (the most recent occurrence)."""
        idx = len(self.structures) - 1 - self.structures[::-1].index(s)
        keys, is_edge = self._cells(s)
        before = self._get(keys)
        if (before < 1).any():
            raise ValueError("structure is not part of the cover")
        after = before - 1
        gone = after == 0
        self.covered -= int(gone.sum())
        self.covered_edges -= int((gone & is_edge).sum())
        self.overlap_cells -= int((before == 2).sum())
        self.overlap_count_bits += self._count_bits(after) - self._count_bits(before)
        self._put(keys, after)
        del self.structures[idx]
        if s not in self.structures:
            self._cache.pop(s, None)
        self.structure_bits -= structure_cost(s, self.n)

    def breakdown(self, overlap_aware: bool) -> CostBreakdown:
        k = len(self.structures)
        lm = _ln(k + 1) + binomial_cost(k + VOCABULARY_SIZE - 1, VOCABULARY_SIZE - 1) + self.structure_bits
        le = split_error_cost(self.universe, self.covered, self.covered_edges, self.g.m)
        lo = 0.0
        if overlap_aware and self.overlap_cells:
            lo = prefix_code_cost(self.overlap_cells, self.universe) + self.overlap_count_bits
        return CostBreakdown(lm, le, lo)


def _ranked(candidates: Sequence[LabeledCandidate]) -> list[LabeledCandidate]:
    # stable sort keeps input order among equal benefits
    return sorted(candidates, key=lambda lc: -lc.benefit_bits)


def empty_model_cost(g: Graph) -> CostBreakdown:
    """Cost of the graph under the empty model (every edge is error)."""
    return total_cost(g, [], overlap_aware=False)


def select_top10(g: Graph, candidates: Sequence[LabeledCandidate], overlap_aware: bool = True):
    """The (up to) ten highest-benefit structures; non-positive benefits are dropped."""
    chosen = [lc.structure for lc in _ranked(candidates) if lc.benefit_bits > 0][:TOP_K]
    model = Model(chosen, Heuristic.TOP10, overlap_aware)
    return model, total_cost(g, chosen, overlap_aware)


def select_greedy_nforget(
    g: Graph,
    candidates: Sequence[LabeledCandidate],
    overlap_aware: bool = True,
    trace: list | None = None,
):
    """Walk candidates by decreasing benefit, keeping each only if the total drops.

    If ``trace`` is a list, the running total after each decision is appended.
    """
    state = CoverState(g)
    best = state.breakdown(overlap_aware).total_bits
    if trace is not None:
        trace.append(best)
    for lc in _ranked(candidates):
        s = lc.structure
        state.add(s)
        total = state.breakdown(overlap_aware).total_bits
        if total < best - IMPROVEMENT_EPS:
            best = total
        else:
            state.remove(s)
        if trace is not None:
            trace.append(best)
    model = Model(list(state.structures), Heuristic.GREEDY, overlap_aware)
    return model, state.breakdown(overlap_aware)


def select(g: Graph, candidates, heuristic: Heuristic | str, overlap_aware: bool):
    heuristic = Heuristic(heuristic)
    if heuristic is Heuristic.TOP10:
        return select_top10(g, candidates, overlap_aware)
    return select_greedy_nforget(g, candidates, overlap_aware)


# ----------------------------------------------------------------------------
# Model files


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def write_model(g: Graph, model: Model, cost: CostBreakdown) -> str:
    header = (
        f"# total_bits={_fmt(cost.total_bits)} model_bits={_fmt(cost.model_bits)} "
        f"error_bits={_fmt(cost.error_bits)} overlap_bits={_fmt(cost.overlap_bits)}\n"
    )
    return header + "".join(s.to_line(g.labels) + "\n" for s in model.structures)


def read_model(g: Graph, text: str) -> list[Structure]:
    """Structures from a model file, mapped back to ``g``'s node indices."""
    index = g.label_index
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(Structure.from_line(line, index))
    return out


__all__ = [
    "CoverState",
    "Heuristic",
    "Model",
    "empty_model_cost",
    "model_cost",
    "read_model",
    "select",
    "select_greedy_nforget",
    "select_top10",
    "structure_benefit",
    "write_model",
]
