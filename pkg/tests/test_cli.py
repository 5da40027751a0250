import csv
import importlib
import io
import json
import subprocess
import sys

import pytest

from graphs import barbell, clique_edges, make_graph, three_cliques
from mdlsumm import cli
from mdlsumm.decompose import ConvergenceError
from mdlsumm.graph import write_edge_list
from mdlsumm.metrics import CSV_COLUMNS


@pytest.fixture
def files(tmp_path):
    paths = {
        "three": three_cliques(),
        "barbell": barbell(6),
        "blocks": make_graph(24, clique_edges(range(8)) + clique_edges(range(8, 16)) + clique_edges(range(16, 24)) + [(7, 8), (15, 16)]),
    }
    out = {}
    for name, g in paths.items():
        p = tmp_path / f"{name}.txt"
        p.write_bytes(write_edge_list(g))
        out[name] = p
    (tmp_path / "triangle.txt").write_text("1 2\n2 3\n3 1\n")
    out["triangle"] = tmp_path / "triangle.txt"
    (tmp_path / "empty.txt").write_text("")
    out["empty"] = tmp_path / "empty.txt"
    (tmp_path / "bad.txt").write_text("1 2\n2 x\n")
    out["bad"] = tmp_path / "bad.txt"
    out["dir"] = tmp_path
    return out


def model_lines(path):
    return [line for line in path.read_text().splitlines() if not line.startswith("#")]


def exit_code(argv):
    """Return code of ``main``, including argparse exits."""
    try:
        return cli.main(argv)
    except SystemExit as exc:
        return exc.code


def read_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# ---------------------------------------------------------------- summarize


def test_summarize_three_cliques_kcbc(files, capsys):
    out = files["dir"] / "m.model"
    code = cli.main(["summarize", str(files["three"]), "--method", "kcbc", "--heuristic", "greedy", "--overlap-aware", "--model-out", str(out)])
    assert code == 0
    lines = model_lines(out)
    assert len(lines) == 2 and all(line.startswith("fc ") for line in lines)


@pytest.mark.parametrize("method", ["spectral", "multilevel"])
def test_summarize_three_cliques_partitioners(files, capsys, method):
    out = files["dir"] / f"{method}.model"
    code = cli.main(["summarize", str(files["three"]), "--method", method, "--overlap-aware", "--model-out", str(out)])
    assert code == 0
    assert [line.split()[0] for line in model_lines(out)] == ["fc", "fc"]
    printed = capsys.readouterr().out
    assert "structures=2 fc=2 st=0 bc=0 ch=0" in printed


def test_summarize_louvain_barbell(files, capsys):
    out = files["dir"] / "b.model"
    code = cli.main(["summarize", str(files["barbell"]), "--method", "louvain", "--resolution", "1", "--model-out", str(out)])
    assert code == 0
    assert len(model_lines(out)) == 2
    assert capsys.readouterr().out.startswith("method=louvain heuristic=greedy overlap_aware=false total_bits=")


def test_summarize_report_json(files, capsys):
    rep = files["dir"] / "r.json"
    assert cli.main(["summarize", str(files["blocks"]), "--method", "louvain", "--resolution", "1", "--report-out", str(rep)]) == 0
    obj = json.loads(rep.read_text())
    assert obj["method"] == "louvain" and obj["seed"] == 0
    assert obj["runtime_decompose_s"] == 0.0
    assert 0 < obj["compression_rate"] < 100


def test_summarize_report_csv_with_timings(files, capsys):
    rep = files["dir"] / "r.csv"
    args = ["summarize", str(files["blocks"]), "--report-out", str(rep), "--report-format", "csv", "--timings"]
    assert cli.main(args) == 0
    rows = read_rows(rep.read_text())
    assert len(rows) == 1 and float(rows[0]["runtime_label_s"]) > 0


def test_summarize_with_partition_file(files, capsys):
    part = files["dir"] / "p.txt"
    part.write_text("0\n" * 8 + "1\n" * 8 + "2\n" * 8)
    out = files["dir"] / "p.model"
    code = cli.main(["summarize", str(files["blocks"]), "--method", "multilevel", "--partition-file", str(part), "--model-out", str(out)])
    assert code == 0
    assert len(model_lines(out)) == 3


def test_summarize_missing_file(files, capsys):
    assert cli.main(["summarize", str(files["dir"] / "nope.txt")]) == 2
    assert "nope.txt" in capsys.readouterr().err


def test_summarize_parse_error(files, capsys):
    assert cli.main(["summarize", str(files["bad"])]) == 2
    assert "line 2" in capsys.readouterr().err


@pytest.mark.parametrize(
    "extra",
    [
        ["--resolution", "0"],
        ["--hub-fraction", "2"],
        ["--method", "spectral", "--clusters", "1"],
        ["--method", "kcbc", "--partition-file", "x.txt"],
        ["--method", "nope"],
        ["--seed", "abc"],
    ],
)
def test_summarize_bad_config(files, capsys, extra):
    assert exit_code(["summarize", str(files["triangle"]), *extra]) == 3
    assert capsys.readouterr().err


def test_summarize_multilevel_too_many_parts(files, capsys):
    assert cli.main(["summarize", str(files["triangle"]), "--method", "multilevel", "--clusters", "5"]) == 3


def test_summarize_convergence_failure(files, capsys, monkeypatch):
    def boom(g, k, cfg):
        raise ConvergenceError("orthogonal iteration did not converge", 0.5)

    monkeypatch.setattr(importlib.import_module("mdlsumm.decompose.spectral"), "laplacian_eigenvectors", boom)
    assert cli.main(["summarize", str(files["blocks"]), "--method", "spectral"]) == 4
    assert "residual norm 0.5" in capsys.readouterr().err


# ---------------------------------------------------------------- compare


def test_compare_all_methods_rows(files, capsys):
    out = files["dir"] / "c.csv"
    assert cli.main(["compare", str(files["blocks"]), "--all-methods", "--resolution", "1", "--output", str(out)]) == 0
    rows = read_rows(out.read_text())
    assert len(rows) == 5 * 2 * 2
    assert [r["method"] for r in rows[::4]] == ["slashburn", "kcbc", "louvain", "spectral", "multilevel"]
    assert [(r["heuristic"], r["overlap_aware"]) for r in rows[:4]] == [
        ("top10", "false"),
        ("top10", "true"),
        ("greedy", "false"),
        ("greedy", "true"),
    ]
    assert "runtime_decompose_s" not in rows[0]
    assert all(r["error"] == "" for r in rows)


def test_compare_subset_and_timings(files, capsys):
    assert cli.main(["compare", str(files["blocks"]), "--methods", "kcbc,slashburn", "--timings"]) == 0
    rows = read_rows(capsys.readouterr().out)
    assert {r["method"] for r in rows} == {"kcbc", "slashburn"} and len(rows) == 8
    assert list(rows[0]) == CSV_COLUMNS


def test_compare_is_deterministic(files, capsys):
    outputs = []
    for i in range(2):
        out = files["dir"] / f"run{i}.csv"
        mdir = files["dir"] / f"models{i}"
        assert cli.main(["compare", str(files["three"]), "--all-methods", "--seed", "7", "--output", str(out), "--model-dir", str(mdir)]) == 0
        outputs.append((out.read_bytes(), {p.name: p.read_bytes() for p in sorted(mdir.iterdir())}))
    assert outputs[0] == outputs[1]
    assert len(outputs[0][1]) == 20
    assert "kcbc_greedy_overlap.model" in outputs[0][1]


def test_compare_failed_method_does_not_abort(files, capsys):
    code = cli.main(["compare", str(files["triangle"]), "--methods", "kcbc,multilevel", "--clusters", "5"])
    assert code == 1
    captured = capsys.readouterr()
    rows = read_rows(captured.out)
    assert len(rows) == 8
    assert all(r["error"] == "" for r in rows[:4])
    assert all(r["error"] for r in rows[4:])
    assert "multilevel" in captured.err


def test_compare_bad_method_name(files, capsys):
    assert cli.main(["compare", str(files["triangle"]), "--methods", "kcbc,bogus"]) == 3


def test_compare_needs_a_method_selection(files, capsys):
    assert exit_code(["compare", str(files["triangle"])]) == 3


# ---------------------------------------------------------------- stats


def test_stats_triangle(files, capsys):
    assert cli.main(["stats", str(files["triangle"])]) == 0
    out = capsys.readouterr().out
    assert out.startswith("nodes=3 edges=3 ")
    assert "max_core=2" in out


def test_stats_empty_file(files, capsys):
    assert cli.main(["stats", str(files["empty"])]) == 0
    assert capsys.readouterr().out.startswith("nodes=0 edges=0")


def test_stats_bad_input(files, capsys):
    assert cli.main(["stats", str(files["bad"])]) == 2
    assert cli.main(["stats", str(files["dir"] / "missing")]) == 2


# ---------------------------------------------------------------- entry points


def test_help_lists_every_flag_with_default():
    sub = cli.build_parser()._subparsers._group_actions[0].choices
    for command in ("summarize", "compare"):
        text = subprocess.run(
            [sys.executable, "-m", "mdlsumm", command, "--help"], capture_output=True, text=True, check=True
        ).stdout
        flags = [a for a in sub[command]._actions if a.option_strings and a.dest != "help"]
        for action in flags:
            assert action.option_strings[0] in text
        assert " ".join(text.split()).count("(default:") == len(flags)


def test_console_script_stats(files):
    res = subprocess.run(["mdlsumm", "stats", str(files["triangle"])], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == "nodes=3 edges=3 min_degree=2 max_degree=2 components=1 max_core=2"
