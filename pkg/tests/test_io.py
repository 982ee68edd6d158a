import json
import math

import numpy as np

from resonator_modes.io import Check, MetricsReport, jsonable, write_csv, write_matrix_csv


def test_csv_round_trip(tmp_path):
    x = np.array([0.1, 1 / 3, np.pi * 1e-17])
    write_csv(tmp_path / "a.csv", ["x", "n"], [x, np.array([1, 2, 3])])
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert lines[0] == "x,n"
    back = np.array([float(line.split(",")[0]) for line in lines[1:]])
    assert np.array_equal(back, x)
    assert lines[1].endswith(",1")


def test_matrix_csv(tmp_path):
    M = np.array([[1 + 2j, 3], [4, 5j]])
    write_matrix_csv(tmp_path / "m.csv", [-1, 0], [-1, 0], M, ("n_out", "n_in"))
    rows = (tmp_path / "m.csv").read_text().splitlines()
    assert rows[0] == "n_out,n_in,re,im"
    assert rows[1] == "-1,-1,1,2"
    assert rows[4] == "0,0,0,5"


def test_jsonable():
    out = jsonable({"a": np.float64(1.5), "b": np.array([1, 2]), "c": float("nan"),
                    "d": np.bool_(True), "e": 1 + 2j})
    assert out == {"a": 1.5, "b": [1, 2], "c": None, "d": True, "e": {"re": 1.0, "im": 2.0}}
    json.dumps(out, allow_nan=False)


def test_checks():
    assert Check("x", 0.5, 1.0, "<").passed
    assert not Check("x", 1.0, 1.0, "<").passed
    assert Check("x", 1.0, 1.0, "<=").passed
    assert not Check("x", math.nan, 1.0, ">=").passed
    d = Check("x", 2.0, 1.0, ">", "target").as_dict()
    assert d["tolerance"] == 1.0 and d["kind"] == "target" and d["passed"]


def test_report_files(tmp_path):
    r = MetricsReport("qpg", {"a": 1}, {"rates": "1/ps"}, {"m": 1.0},
                      [Check("c", 1.0, 2.0, "<"), Check("t", 0.0, 1.0, ">=", "target")],
                      {"wall": 0.1})
    assert r.invariants_passed
    r.write(tmp_path)
    data = json.loads((tmp_path / "metrics.json").read_text())
    assert data["schema_version"] == "1.0"
    assert all("tolerance" in c for c in data["checks"])
    assert "timings" not in data
    assert json.loads((tmp_path / "timings.json").read_text())["seconds"]["wall"] == 0.1
