from __future__ import annotations

import json
import subprocess
import sys

import pytest

from twoweight.cli import main

REPORT_KEYS = ["params", "length", "dimension", "weights", "theorem7_match", "dual", "projective",
               "minimal"]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_27_6_code(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(["analyze", "--p", "2", "--e", "1", "--s", "3", "--c", "0", "--json", str(path)], capsys)
    assert code == 0
    report = json.loads(out)
    assert json.loads(path.read_text()) == report
    assert list(report)[: len(REPORT_KEYS)] == REPORT_KEYS
    assert report["length"]["computed"] == 27 and report["dimension"] == 6
    assert {w["w"]: w["count_bruteforce"] for w in report["weights"]} == {12: 36, 16: 27}
    d = report["dual"]
    assert [d["n"], d["k"], d["d_observed"]] == [27, 21, 3]
    assert report["minimal"]["holds"] is True


def test_analyze_emits_artifacts(capsys, tmp_path):
    g, s, m = tmp_path / "g.txt", tmp_path / "d.txt", tmp_path / "m.txt"
    code, out, _ = run(["analyze", "--p", "2", "--e", "1", "--s", "2", "--c", "1", "--emit-graph", str(g),
                        "--emit-set", str(s), "--emit-matrix", str(m)], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["projective"] is True
    assert report["srg"]["counted"] == [16, 10, 6, 6]
    assert g.read_text().startswith("16 10\n")
    assert s.read_text().splitlines()[0] == "2 1 2 1 10"
    rows = [ln.split() for ln in m.read_text().splitlines()]
    assert len(rows) == 4 and all(len(r) == 10 for r in rows)


def test_defining_set_file(capsys, tmp_path):
    s = tmp_path / "d.txt"
    assert run(["analyze", "--p", "2", "--e", "1", "--s", "2", "--c", "0", "--emit-set", str(s)], capsys)[0] == 0
    lines = s.read_text().splitlines()
    assert lines[0] == "2 1 2 0 5" and len(lines) == 6


def test_table_row_discrepancy_is_flagged(capsys):
    code, out, _ = run(["analyze", "--p", "2", "--e", "2", "--s", "2", "--c", "1"], capsys)
    assert code == 0
    t1 = json.loads(out)["length"]["table1"]
    assert t1["n"] == 64 and t1["matches"] is False and "68" in t1["note"]


@pytest.mark.parametrize("argv, message", [
    (["analyze", "--p", "2", "--e", "1", "--s", "1", "--c", "0"], "empty defining set: c = 0 requires s > 1"),
    (["analyze", "--p", "4", "--e", "1", "--s", "1", "--c", "1"], "not prime"),
    (["analyze", "--p", "2", "--e", "1", "--s", "13", "--c", "1"], "exceeds bound"),
    (["analyze", "--p", "2", "--e", "1", "--s", "2", "--c", "5"], "outside"),
    (["charsums", "--p", "9", "--e", "1", "--s", "1"], "not prime"),
])
def test_invalid_input_exits_2(argv, message, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert message in err


def test_bad_arguments_exit_2(capsys):
    assert run(["analyze", "--p", "2"], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2


def test_graph_on_non_projective_code_exits_2(capsys, tmp_path):
    code, _, err = run(["analyze", "--p", "3", "--e", "1", "--s", "2", "--c", "1",
                        "--emit-graph", str(tmp_path / "g.txt")], capsys)
    assert code == 2 and "not projective" in err


def test_charsums_subcommand(capsys):
    code, out, _ = run(["charsums", "--p", "3", "--e", "1", "--s", "2"], capsys)
    assert code == 0
    names = [ln.split(":")[0] for ln in out.splitlines()]
    assert names == ["orthogonality", "gauss_sum", "quadratic_sum_odd", "delta_sum", "s_c_sum"]


def test_sweep_is_deterministic_across_thread_counts(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["sweep", "--max-size", "256", "--threads", "1", "--json", str(a)], capsys)[0] == 0
    assert run(["sweep", "--max-size", "256", "--threads", "3", "--json", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    seen = {(c["params"]["q"], c["params"]["s"]) for c in data["cases"]}
    assert {(2, 2), (2, 3), (3, 1), (4, 1), (4, 2), (5, 1), (7, 1), (9, 1), (2, 4)} <= seen
    assert any(c["params"]["c_index"] == 0 for c in data["cases"])


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "twoweight", "analyze", "--p", "2", "--e", "1",
                           "--s", "1", "--c", "0"], capture_output=True, text=True)
    assert proc.returncode == 2
