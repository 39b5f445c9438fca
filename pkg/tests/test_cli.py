import json

import numpy as np
import pytest

from spinwrithe import cli
from spinwrithe import grid_field as gf


def run(argv):
    return cli.main(argv)


def test_usage_errors_exit_2(capsys):
    assert run([]) == cli.EXIT_USAGE
    assert run(["frobnicate"]) == cli.EXIT_USAGE
    assert run(["generate"]) == cli.EXIT_USAGE  # missing required flags
    capsys.readouterr()


def test_generate_and_measure_round_trip(tmp_path, capsys):
    path = tmp_path / "f.json"
    rc = run(
        [
            "generate",
            "--kind",
            "twist",
            "--n",
            "512",
            "--theta0",
            str(np.pi / 2),
            "--w",
            "2.0",
            "--dphi",
            str(2 * np.pi),
            "--w-phi",
            "1.0",
            "--out",
            str(path),
        ]
    )
    assert rc == cli.EXIT_OK
    f = gf.load_field(path)
    assert f.grid.n == 512

    rc = run(["measure", "--in", str(path), "--method", "angular", "--out", "-"])
    assert rc == cli.EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["angular"] == pytest.approx(doc["P"] / (2 * np.pi))
    assert doc["H"] > 0.0
    assert doc["M"] < 0.0


def test_measure_all_methods_agree(tmp_path, capsys):
    path = tmp_path / "f.json"
    run(
        [
            "generate",
            "--kind",
            "twist",
            "--n",
            "1024",
            "--out",
            str(path),
        ]
    )
    rc = run(["measure", "--in", str(path), "--method", "all", "--out", "-"])
    assert rc == cli.EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["fuller"] == pytest.approx(doc["angular"], abs=1e-12)
    assert doc["gauss"] == pytest.approx(doc["angular"], abs=5e-3)
    assert doc["fuller_hypothesis_ok"] is True
    assert doc["bounds"]["paper_ok"] is True


def test_missing_input_exits_4(tmp_path, capsys):
    rc = run(["measure", "--in", str(tmp_path / "nope.json"), "--out", "-"])
    assert rc == cli.EXIT_IO
    capsys.readouterr()


def test_invalid_field_params_exit_3(tmp_path, capsys):
    rc = run(
        [
            "generate",
            "--kind",
            "twist",
            "--theta0",
            "9.0",  # theta > pi is invalid
            "--out",
            str(tmp_path / "f.json"),
        ]
    )
    assert rc == cli.EXIT_VALIDATION
    capsys.readouterr()


def test_close_writes_curve(tmp_path, capsys):
    field = tmp_path / "f.json"
    curve = tmp_path / "c.csv"
    run(["generate", "--kind", "twist", "--n", "256", "--out", str(field)])
    rc = run(["close", "--in", str(field), "--out", str(curve)])
    assert rc == cli.EXIT_OK
    with open(str(curve) + ".json") as fh:
        side = json.load(fh)
    assert side["closed"] is True
    rows = curve.read_text().strip().splitlines()
    assert rows[0] == "s,x,y,z,tx,ty,tz"
    assert side["n_vertices"] == len(rows) - 1
    capsys.readouterr()


def test_evolve_writes_trace_and_drifts(tmp_path, capsys):
    field = tmp_path / "f.json"
    out = tmp_path / "trace.csv"
    run(["generate", "--kind", "twist", "--n", "256", "--out", str(field)])
    h = 60.0 / 255
    rc = run(
        [
            "evolve",
            "--in",
            str(field),
            "--t-end",
            "0.1",
            "--dt",
            str(0.25 * h * h),
            "--record-every",
            "5",
            "--out",
            str(out),
        ]
    )
    assert rc == cli.EXIT_OK
    with open(str(out) + ".drift.json") as fh:
        drifts = json.load(fh)
    assert drifts["rel_drift_H"] < 1e-3
    rows = out.read_text().strip().splitlines()
    assert rows[0].startswith("t,")
    capsys.readouterr()


def test_evolve_cfl_violation_exits_3(tmp_path, capsys):
    field = tmp_path / "f.json"
    run(["generate", "--kind", "twist", "--n", "256", "--out", str(field)])
    rc = run(
        ["evolve", "--in", str(field), "--t-end", "0.1", "--dt", "1.0", "--out", str(tmp_path / "t.csv")]
    )
    assert rc == cli.EXIT_VALIDATION
    capsys.readouterr()


def test_homotopy_fixture_small(tmp_path, capsys):
    out = tmp_path / "path.csv"
    rc = run(
        [
            "homotopy",
            "--fixture",
            "loop-passage",
            "--steps",
            "8",
            "--method",
            "angular",
            "--out",
            str(out),
        ]
    )
    assert rc == cli.EXIT_OK
    rows = out.read_text().strip().splitlines()
    assert len(rows) == 9
    capsys.readouterr()


def test_bench_small(capsys):
    rc = run(["bench", "--n", "64", "--threads", "1", "--out", "-"])
    assert rc == cli.EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["n"] == 64
    assert doc["seconds"] > 0.0
    assert np.isfinite(doc["writhe"])
