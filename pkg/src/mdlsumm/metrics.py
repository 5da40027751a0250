"""Compression rate, coverage, and the summary report formats."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from .codec import CostBreakdown
from .graph import Graph
from .structures import KINDS, Kind, Structure

SIGNIFICANT = 6


def compression_rate(final: CostBreakdown, baseline: CostBreakdown) -> float:
    """Final bits over empty-model bits, in percent. Can exceed 100."""
    if not baseline.total_bits > 0:
        raise ValueError("baseline cost must be positive")
    # divide first so that equal costs give exactly 100
    return final.total_bits / baseline.total_bits * 100.0


def coverage(g: Graph, structures: Sequence[Structure]) -> tuple[float, float]:
    """Fraction of nodes in some structure and of edges implied by some structure."""
    if not structures:
        return 0.0, 0.0
    nodes = np.unique(np.concatenate([np.asarray(s.nodes, dtype=np.int64) for s in structures]))
    node_ratio = len(nodes) / g.n if g.n else 0.0
    if g.m == 0:
        return node_ratio, 0.0
    keys = np.unique(np.concatenate([s.cell_keys(g.n) for s in structures]))
    hit = int(np.isin(g.edge_keys, keys, assume_unique=True).sum())
    return node_ratio, hit / g.m


def type_histogram(structures: Iterable[Structure]) -> dict[str, int]:
    hist = {k.value: 0 for k in KINDS}
    for s in structures:
        hist[Kind(s.kind).value] += 1
    return hist


def _round(x: float) -> float:
    return float(f"{x:.{SIGNIFICANT}g}")


@dataclass
class SummaryReport:
    method: str
    heuristic: str
    overlap_aware: bool
    compression_rate: float
    total_bits: float
    baseline_bits: float
    node_coverage_pre: float
    node_coverage_post: float
    edge_coverage_pre: float
    edge_coverage_post: float
    type_histogram_pre: dict[str, int] = field(default_factory=lambda: type_histogram([]))
    type_histogram_post: dict[str, int] = field(default_factory=lambda: type_histogram([]))
    runtime_decompose_s: float = 0.0
    runtime_label_s: float = 0.0
    runtime_assemble_s: float = 0.0
    seed: int = 0
    error: str = ""

    @property
    def runtime_total_s(self) -> float:
        return self.runtime_decompose_s + self.runtime_label_s + self.runtime_assemble_s

    def rounded(self) -> "SummaryReport":
        """Copy with every float cut to the serialized precision."""
        values = {}
        for f in fields(self):
            v = getattr(self, f.name)
            values[f.name] = _round(v) if isinstance(v, float) else v
        return SummaryReport(**values)


_HIST_FIELDS = ("type_histogram_pre", "type_histogram_post")


def _flat_columns() -> list[str]:
    cols = []
    for f in fields(SummaryReport):
        if f.name in _HIST_FIELDS:
            cols.extend(f"{f.name}_{k.value}" for k in KINDS)
        else:
            cols.append(f.name)
    return cols


CSV_COLUMNS = _flat_columns()


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{SIGNIFICANT}g}"
    return str(v)


def _flat_row(r: SummaryReport) -> list[str]:
    row = []
    for f in fields(r):
        v = getattr(r, f.name)
        if f.name in _HIST_FIELDS:
            row.extend(str(v.get(k.value, 0)) for k in KINDS)
        else:
            row.append(_cell(v))
    return row


def emit_csv(reports: Sequence[SummaryReport], columns: Sequence[str] | None = None) -> bytes:
    """One row per report under a shared header. ``columns`` picks and orders a subset."""
    columns = list(columns or CSV_COLUMNS)
    pick = [CSV_COLUMNS.index(c) for c in columns]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in reports:
        row = _flat_row(r)
        w.writerow([row[i] for i in pick])
    return buf.getvalue().encode("utf-8")


def emit_json(r: SummaryReport) -> bytes:
    obj = {}
    for f in fields(r):
        v = getattr(r, f.name)
        if f.name in _HIST_FIELDS:
            v = {k.value: int(v.get(k.value, 0)) for k in KINDS}
        elif isinstance(v, float):
            v = _round(v)
        obj[f.name] = v
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")


def emit_report(r: SummaryReport, format: str = "json") -> bytes:
    if format == "json":
        return emit_json(r)
    if format == "csv":
        return emit_csv([r])
    raise ValueError(f"unknown report format {format!r}")


def _parse_value(name: str, text: str):
    kind = SummaryReport.__dataclass_fields__[name].type
    if kind == "bool":
        return text == "true"
    if kind == "int":
        return int(text)
    if kind == "float":
        return float(text)
    return text


def parse_csv(data: bytes) -> list[SummaryReport]:
    rows = list(csv.reader(io.StringIO(data.decode("utf-8"))))
    if not rows:
        return []
    header = rows[0]
    out = []
    for row in rows[1:]:
        cells = dict(zip(header, row))
        values = {}
        for f in fields(SummaryReport):
            if f.name in _HIST_FIELDS:
                values[f.name] = {k.value: int(cells[f"{f.name}_{k.value}"]) for k in KINDS}
            elif f.name in cells:
                values[f.name] = _parse_value(f.name, cells[f.name])
        out.append(SummaryReport(**values))
    return out


def parse_report(data: bytes, format: str = "json") -> SummaryReport | list[SummaryReport]:
    """Inverse of :func:`emit_report`. CSV input gives a list of reports."""
    if format == "csv":
        return parse_csv(data)
    if format != "json":
        raise ValueError(f"unknown report format {format!r}")
    obj = json.loads(data.decode("utf-8"))
    return SummaryReport(**{f.name: obj[f.name] for f in fields(SummaryReport) if f.name in obj})
