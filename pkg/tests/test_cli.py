import json
import subprocess
import sys

import pytest

from planforge.cli import main
from planforge.oracle import read_topk_csv


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_optimize_report_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["optimize", "--algo", "tlbo", "--seed", "7", "--out", str(a)], capsys)[0] == 0
    assert run(["optimize", "--algo", "tlbo", "--seed", "7", "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text(encoding="utf-8"))
    assert len(doc["ranked"]) == 20
    assert doc["config"]["max_iterations"] == 100 and doc["config"]["mode"] == "discrete"
    assert {"qac", "qlc", "lpc", "control_site", "fitness"} <= set(doc["ranked"][0])
    assert doc["trace"][0]["iteration"] == 0


def test_optimize_agga_defaults(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, text, _ = run(["optimize", "--algo", "agga", "--out", str(out)], capsys)
    assert code == 0 and "agga" in text
    cfg = json.loads(out.read_text(encoding="utf-8"))["config"]
    assert (cfg["crossover_probability"], cfg["mutation_probability"], cfg["weights"]) == (0.8, 0.2, [0.2, 0.5, 0.3])


def test_bad_weights_exit_2(capsys):
    code, _, err = run(["optimize", "--algo", "agga", "--weights", "0.2,0.5,0.9"], capsys)
    assert code == 2 and "weights must sum to 1" in err


def test_missing_file_names_flag(tmp_path, capsys):
    code, _, err = run(["optimize", "--rsm", str(tmp_path / "nope.csv")], capsys)
    assert code == 2 and "--rsm" in err


def test_bad_query_names_file(tmp_path, capsys):
    q = tmp_path / "q.sql"
    q.write_text("SELECT a FROM R1 WHERE R1.a = R9.b", encoding="utf-8")
    code, _, err = run(["optimize", "--query", str(q)], capsys)
    assert code == 2 and "--query" in err and "R9" in err


def test_unsupported_mode(capsys):
    assert run(["optimize", "--algo", "vega", "--mode", "faithful"], capsys)[0] == 2


def test_oracle_sample_top20(capsys):
    code, out, _ = run(["oracle", "--k", "20"], capsys)
    rows = read_topk_csv(out)
    assert code == 0 and len(rows) == 20
    fits = [r[2] for r in rows]
    assert fits == sorted(fits)


def test_oracle_single_plan(tmp_path, capsys):
    assert run(["generate", "--sites", "3", "--relations", "2", "--degree", "1", "--out", str(tmp_path)], capsys)[0] == 0
    args = ["oracle", "--rsm", str(tmp_path / "rsm.csv"), "--catalog", str(tmp_path / "catalog.yaml"),
            "--query", str(tmp_path / "query.sql"), "--k", "5"]
    code, out, _ = run(args, capsys)
    rows = read_topk_csv(out)
    assert code == 0 and len(rows) == 1 and rows[0][0] == 1


def test_oracle_saturation_exit_3(capsys):
    code, _, err = run(["oracle", "--bound", "1000"], capsys)
    assert code == 3 and "3360000" in err


def test_generate_impossible_degree(tmp_path, capsys):
    code, _, err = run(["generate", "--sites", "4", "--relations", "2", "--degree", "5", "--out", str(tmp_path)], capsys)
    assert code == 2 and "impossible" in err


def test_sweep_bad_spec(tmp_path, capsys):
    spec = tmp_path / "s.yaml"
    spec.write_text("algorithms: [tlbo\n", encoding="utf-8")
    assert run(["sweep", str(spec)], capsys)[0] == 2


def test_console_script_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "planforge.cli", "optimize", "--iters", "3", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text(encoding="utf-8"))["iterations"] == 3


def test_runtime_error_exit_1(monkeypatch, capsys):
    import planforge.cli as cli

    def boom(*a, **k):
        raise ArithmeticError("overflow")

    monkeypatch.setattr(cli, "optimize", boom)
    assert run(["optimize"], capsys)[0] == 1
