import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ensembles.cli import emit_histogram, main
from ensembles.rng import chunk_plan, stream


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_sample_ewens_jsonl(tmp_path, capsys):
    out = tmp_path / "e.jsonl"
    assert main(["sample-ewens", "--n", "6", "--theta", "0.5", "--count", "40", "--seed", "3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 40
    rec = json.loads(lines[0])
    assert sorted(rec["images"]) == list(range(1, 7))
    assert sum(rec["cycle_type"]) == 6


def test_sample_pd_csv(capsys):
    code, out = run(["sample-pd", "--theta", "1.5", "--method", "dirichlet", "--k", "4", "--count", "5"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x1", "x2", "x3", "x4"] and len(rows) == 6
    vals = [list(map(float, r)) for r in rows[1:]]
    assert all(r == sorted(r, reverse=True) for r in vals)


def test_sample_plancherel_stats(capsys):
    for stat in ("shape", "lis", "edge", "supdist"):
        code, out = run(["sample-plancherel", "--n", "50", "--count", "3", "--stats", stat, "--sampler", "hookwalk"], capsys)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == [stat] and len(rows) == 4


def test_shape_rows_are_partitions(capsys):
    _, out = run(["sample-plancherel", "--n", "30", "--count", "2", "--format", "json"], capsys)
    shapes = json.loads(out)
    assert all(sum(s) == 30 for s in shapes)


def test_outputs_are_deterministic_and_thread_independent(capsys):
    argv = ["sample-pd", "--theta", "0.8", "--count", "2500", "--seed", "11"]
    _, a = run(argv, capsys)
    _, b = run(argv + ["--threads", "3"], capsys)
    _, c = run(argv[:-1] + ["12"], capsys)
    assert a == b and a != c


def test_kernel_eval(capsys):
    code, out = run(["kernel", "eval", "--kind", "sine", "--params", "0", "--x", "2", "--y", "2"], capsys)
    assert code == 0 and json.loads(out)["value"] == 0.5
    code, out = run(["kernel", "eval", "--kind", "bessel", "--params", "2", "--x", "1/2", "--y=-3/2"], capsys)
    assert code == 0 and math.isfinite(json.loads(out)["value"])
    assert main(["kernel", "eval", "--kind", "bessel", "--params", "2", "--x", "1", "--y", "1/2"]) == 2
    assert main(["kernel", "eval", "--kind", "sine", "--params", "3", "--x", "1", "--y", "1"]) == 2


def test_zmeasure_commands(capsys):
    code, out = run(["zmeasure", "--n", "4", "--z", "2", "--zp", "3"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["shape", "weight"]
    assert math.fsum(float(r[1]) for r in rows[1:]) == pytest.approx(1.0)
    code, out = run(["zmeasure", "--n", "10", "--z", "2", "--zp", "3", "--xi", "0.3", "--emit", "report"], capsys)
    assert code == 0 and json.loads(out)["status"] == "pass"
    assert main(["zmeasure", "--n", "3", "--z", "-1", "--zp", "1"]) == 2
    assert main(["zmeasure", "--n", "3", "--z", "2", "--zp", "3", "--emit", "report", "--format", "csv"]) == 2


def test_schur_command(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"kind": "zxi", "z": 2, "zp": 3, "xi": 0.3}))
    code, out = run(["schur", "--spec", "@" + str(spec), "--lmax", "8", "--format", "json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["closed_form"] == pytest.approx(0.7**-6)
    assert rep["weights"][0]["probability"] == pytest.approx(0.7**6)
    code, out = run(["schur", "--spec", '{"kind": "explicit", "h": [1, 0.5]}', "--lmax", "2"], capsys)
    assert code == 0
    assert main(["schur", "--spec", '{"kind": "explicit", "h": [1]}', "--lmax", "3"]) == 2
    assert main(["schur", "--spec", "not json", "--lmax", "3"]) == 2


def test_verify_reports(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "lpp", "--seed", "7", "--out", str(a)]) == 0
    assert main(["verify", "lpp", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["status"] == "pass"
    check = rep["checks"][0]
    assert set(check) == {"name", "anchor", "status", "measured", "tolerance", "runtime"}
    assert check["runtime"] is None
    main(["verify", "lpp", "--timing", "--out", str(b)])
    assert json.loads(b.read_text())["checks"][0]["runtime"] >= 0


def test_verify_determinantal(capsys):
    code, out = run(["verify", "determinantal", "--seed", "7"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass"
    assert rep["checks"][0]["measured"]["max_abs_error"] < 1e-6


def test_verify_failure_exit_code(capsys):
    code, out = run(["verify", "determinantal", "--cutoff", "4"], capsys)
    assert code == 1 and json.loads(out)["status"] == "fail"


def test_verify_ewens_exact(capsys):
    code, out = run(["verify", "ewens-exact"], capsys)
    rep = json.loads(out)
    assert code == 0 and all(c["measured"] == 0 for c in rep["checks"])


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nosuch"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["sample-pd"])
    assert exc.value.code == 2
    assert main(["sample-pd", "--theta", "1", "--out", str(tmp_path / "missing" / "x.csv")]) == 2
    assert main(["sample-pd", "--theta", "-1"]) == 2
    assert main(["sample-ewens", "--n", "3", "--theta", "1", "--format", "csv"]) == 2


def test_histogram(tmp_path):
    with pytest.raises(ValueError):
        emit_histogram([0.1, 0.2], 0)
    with pytest.raises(ValueError):
        emit_histogram([], 5)
    x = stream(5, "cli", 0).random(10_000)
    path = tmp_path / "h.csv"
    rows = emit_histogram(x, 10, str(path), 0.0, 1.0)
    se = math.sqrt(10_000 * 0.1 * 0.9)
    assert all(abs(r[2] - 1000) < 5 * se for r in rows)
    table = list(csv.reader(path.open()))
    assert table[0] == ["bin_lo", "bin_hi", "count", "density"]
    assert math.fsum(float(r[3]) * 0.1 for r in table[1:]) == pytest.approx(1.0)
    again = emit_histogram(stream(5, "cli", 0).random(10_000), 10, None, 0.0, 1.0)
    assert again == rows


def test_histogram_via_cli(capsys):
    code, out = run(["sample-plancherel", "--n", "100", "--count", "200", "--stats", "lis", "--hist", "5"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 6 and sum(int(r[2]) for r in rows[1:]) == 200
    assert main(["sample-plancherel", "--n", "10", "--hist", "5"]) == 2


def test_chunk_plan():
    assert chunk_plan(2500, 1000) == [(0, 1000), (1, 1000), (2, 500)]
    assert chunk_plan(0, 10) == []
    a = stream(1, "pdirichlet", 2).random(3)
    b = stream(1, "pdirichlet", 2).random(3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, stream(1, "pdirichlet", 3).random(3))


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "ensembles.cli", "kernel", "eval", "--kind", "sine", "--params", "1", "--x", "0", "--y", "0"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["value"] == pytest.approx(math.acos(0.5) / math.pi)
