"""Decompose, label, and assemble in one call, with per-step timings."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .assembly import Heuristic, Model, empty_model_cost, select
from .codec import CostBreakdown
from .decompose import DecomposerConfig, Partition, decompose
from .graph import CandidateSubgraph, Graph
from .labeling import LabeledCandidate, label_all
from .metrics import SummaryReport, compression_rate, coverage, type_histogram


@dataclass
class PipelineResult:
    candidates: list[CandidateSubgraph]
    labeled: list[LabeledCandidate]
    model: Model
    cost: CostBreakdown
    baseline: CostBreakdown
    timings: dict[str, float]

    def report(self, g: Graph, cfg: DecomposerConfig, with_timings: bool = True) -> SummaryReport:
        pre = [lc.structure for lc in self.labeled]
        node_pre, edge_pre = coverage(g, pre)
        node_post, edge_post = coverage(g, self.model.structures)
        t = self.timings if with_timings else {}
        return SummaryReport(
            method=cfg.method.value,
            heuristic=self.model.heuristic.value,
            overlap_aware=self.model.overlap_aware,
            compression_rate=compression_rate(self.cost, self.baseline) if self.baseline.total_bits > 0 else 100.0,
            total_bits=self.cost.total_bits,
            baseline_bits=self.baseline.total_bits,
            node_coverage_pre=node_pre,
            node_coverage_post=node_post,
            edge_coverage_pre=edge_pre,
            edge_coverage_post=edge_post,
            type_histogram_pre=type_histogram(pre),
            type_histogram_post=type_histogram(self.model.structures),
            runtime_decompose_s=t.get("decompose", 0.0),
            runtime_label_s=t.get("label", 0.0),
            runtime_assemble_s=t.get("assemble", 0.0),
            seed=cfg.seed,
        )


def generate(g: Graph, cfg: DecomposerConfig, partition: Partition | None = None):
    """Steps one and two: candidates and their labels, with timings."""
    t0 = time.perf_counter()
    candidates = decompose(g, cfg, partition)
    t1 = time.perf_counter()
    labeled = label_all(g, candidates)
    t2 = time.perf_counter()
    return candidates, labeled, {"decompose": t1 - t0, "label": t2 - t1}


def assemble(g: Graph, labeled, heuristic: Heuristic | str, overlap_aware: bool):
    t0 = time.perf_counter()
    model, cost = select(g, labeled, heuristic, overlap_aware)
    return model, cost, time.perf_counter() - t0


def run(
    g: Graph,
    cfg: DecomposerConfig,
    heuristic: Heuristic | str = Heuristic.GREEDY,
    overlap_aware: bool = True,
    partition: Partition | None = None,
) -> PipelineResult:
    candidates, labeled, timings = generate(g, cfg, partition)
    model, cost, t_assemble = assemble(g, labeled, heuristic, overlap_aware)
    timings["assemble"] = t_assemble
    return PipelineResult(candidates, labeled, model, cost, empty_model_cost(g), timings)
