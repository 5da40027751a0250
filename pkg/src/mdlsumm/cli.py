"""Command-line front end: ``summarize``, ``compare`` and ``stats``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .assembly import Heuristic, empty_model_cost, write_model
from .decompose import (
    PARTITION_METHODS,
    ConvergenceError,
    DecomposerConfig,
    Method,
    core_numbers,
    ingest_partition_file,
)
from .graph import ParseError, connected_components, load_edge_list
from .metrics import CSV_COLUMNS, SummaryReport, emit_csv, emit_report
from .pipeline import PipelineResult, assemble, generate, run

EXIT_OK = 0
EXIT_ROW_FAILED = 1
EXIT_PARSE = 2
EXIT_CONFIG = 3
EXIT_CONVERGENCE = 4

TIMING_COLUMNS = ("runtime_decompose_s", "runtime_label_s", "runtime_assemble_s")


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors here, so they exit 3 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _fail(code: int, message: str) -> int:
    print(f"mdlsumm: {message}", file=sys.stderr)
    return code


def _add_decomposer_flags(p: argparse.ArgumentParser):
    p.add_argument("--resolution", type=float, default=1e-4, help="Louvain resolution")
    p.add_argument(
        "--clusters",
        type=int,
        default=None,
        help="cluster count for spectral and multilevel (default: %(default)s, meaning ceil(n/100) clamped to [2, 500])",
    )
    p.add_argument(
        "--hub-fraction", type=float, default=0.005, help="SlashBurn hubs removed per round, as a fraction"
    )
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument(
        "--max-iterations", type=int, default=10_000, help="cap on decomposer iterations"
    )
    p.add_argument(
        "--eigensolver",
        choices=("auto", "dense", "lanczos", "orthogonal"),
        default="auto",
        help="spectral eigensolver",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mdlsumm", description="MDL graph summarization with pluggable decomposers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser(
        "summarize",
        help="summarize one graph",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    s.add_argument("input", help="edge list (optionally gzip-compressed)")
    s.add_argument("--method", choices=[m.value for m in Method], default=Method.KCBC.value, help="decomposer")
    s.add_argument("--heuristic", choices=[h.value for h in Heuristic], default=Heuristic.GREEDY.value, help="summary assembly heuristic")
    s.add_argument("--overlap-aware", action="store_true", default=False, help="charge for multiply-covered cells")
    _add_decomposer_flags(s)
    s.add_argument("--partition-file", default=None, help="use this partition (one id per line) instead of running the partitioner")
    s.add_argument("--model-out", default=None, help="write the model file here")
    s.add_argument("--report-out", default=None, help="write the report here")
    s.add_argument("--report-format", choices=("json", "csv"), default="json", help="report file format")
    s.add_argument("--timings", action="store_true", default=False, help="record wall-clock step timings in the report")

    c = sub.add_parser(
        "compare",
        help="run several methods with both heuristics and overlap settings",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    c.add_argument("input", help="edge list (optionally gzip-compressed)")
    group = c.add_mutually_exclusive_group(required=True)
    group.add_argument("--all-methods", action="store_true", help="run all five methods")
    group.add_argument("--methods", default=None, help="comma-separated method names, e.g. kcbc,slashburn")
    _add_decomposer_flags(c)
    c.add_argument("--output", default=None, help="write the CSV here instead of standard output")
    c.add_argument("--model-dir", default=None, help="write one model file per row into this directory")
    c.add_argument("--timings", action="store_true", default=False, help="add wall-clock timing columns")

    t = sub.add_parser("stats", help="print basic graph statistics")
    t.add_argument("input", help="edge list (optionally gzip-compressed)")
    return parser


def _config(args, method: Method) -> DecomposerConfig:
    return DecomposerConfig(
        method=method,
        hub_fraction=args.hub_fraction,
        cluster_count=args.clusters,
        resolution=args.resolution,
        seed=args.seed,
        max_iterations=args.max_iterations,
        eigensolver=args.eigensolver,
    )


def _write(path: str | None, data: bytes):
    if path is None:
        return
    Path(path).write_bytes(data)


def cmd_summarize(args) -> int:
    try:
        cfg = _config(args, Method(args.method))
    except ValueError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    if args.partition_file and cfg.method not in PARTITION_METHODS:
        return _fail(EXIT_CONFIG, "--partition-file needs a partition method (louvain, spectral, multilevel)")
    try:
        g = load_edge_list(args.input)
        partition = ingest_partition_file(args.partition_file, g) if args.partition_file else None
    except (OSError, ParseError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    try:
        result = run(g, cfg, args.heuristic, args.overlap_aware, partition)
    except ConvergenceError as exc:
        return _fail(EXIT_CONVERGENCE, str(exc))
    except ValueError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    report = result.report(g, cfg, with_timings=args.timings)
    try:
        _write(args.model_out, write_model(g, result.model, result.cost).encode("utf-8"))
        _write(args.report_out, emit_report(report, args.report_format))
    except OSError as exc:
        return _fail(EXIT_PARSE, str(exc))
    hist = " ".join(f"{k}={v}" for k, v in report.type_histogram_post.items())
    print(
        f"method={cfg.method.value} heuristic={report.heuristic} overlap_aware={str(report.overlap_aware).lower()} "
        f"total_bits={result.cost.total_bits:.6g} compression={report.compression_rate:.6g}% "
        f"structures={len(result.model)} {hist}"
    )
    return EXIT_OK


def _parse_methods(args) -> list[Method]:
    if args.all_methods:
        return list(Method)
    names = [x.strip() for x in args.methods.split(",") if x.strip()]
    if not names:
        raise ValueError("--methods is empty")
    out = []
    for name in names:
        m = Method(name)
        if m not in out:
            out.append(m)
    return out


def cmd_compare(args) -> int:
    try:
        methods = _parse_methods(args)
        configs = [_config(args, m) for m in methods]
    except ValueError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    try:
        g = load_edge_list(args.input)
    except (OSError, ParseError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    model_dir = Path(args.model_dir) if args.model_dir else None
    if model_dir is not None:
        model_dir.mkdir(parents=True, exist_ok=True)

    baseline = empty_model_cost(g)
    rows = []
    failed = False
    for cfg in configs:
        try:
            candidates, labeled, timings = generate(g, cfg)
            error = None
        except (ConvergenceError, ValueError) as exc:
            error = str(exc)
        for heuristic in Heuristic:
            for overlap in (False, True):
                if error is not None:
                    failed = True
                    rows.append(
                        SummaryReport(cfg.method.value, heuristic.value, overlap, 0.0, 0.0, baseline.total_bits,
                                      0.0, 0.0, 0.0, 0.0, seed=cfg.seed, error=error)
                    )
                    continue
                model, cost, t_assemble = assemble(g, labeled, heuristic, overlap)
                result = PipelineResult(candidates, labeled, model, cost, baseline, {**timings, "assemble": t_assemble})
                rows.append(result.report(g, cfg, with_timings=args.timings))
                if model_dir is not None:
                    name = f"{cfg.method.value}_{heuristic.value}_{'overlap' if overlap else 'plain'}.model"
                    (model_dir / name).write_text(write_model(g, model, cost))
    columns = [c for c in CSV_COLUMNS if args.timings or c not in TIMING_COLUMNS]
    data = emit_csv(rows, columns)
    if args.output:
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    for r in rows:
        if r.error:
            print(f"mdlsumm: {r.method}/{r.heuristic}/overlap={r.overlap_aware}: {r.error}", file=sys.stderr)
    return EXIT_ROW_FAILED if failed else EXIT_OK


def cmd_stats(args) -> int:
    try:
        g = load_edge_list(args.input)
    except (OSError, ParseError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    deg = g.degrees
    lo = int(deg.min()) if g.n else 0
    hi = int(deg.max()) if g.n else 0
    comps = len(connected_components(g)) if g.n else 0
    kmax = max(core_numbers(g), default=0)
    print(f"nodes={g.n} edges={g.m} min_degree={lo} max_degree={hi} components={comps} max_core={kmax}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"summarize": cmd_summarize, "compare": cmd_compare, "stats": cmd_stats}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
