import csv
import json

import numpy as np
import pytest

from robust_contracts import Instance, TypedInstance, gen_random, gen_tight_ub
from robust_contracts import io
from robust_contracts.cli import main


@pytest.fixture
def fam2_file(tmp_path):
    path = tmp_path / "fam2.json"
    io.dump(gen_tight_ub(0.25), path)
    return str(path)


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_validate_ok(fam2_file):
    assert main(["validate", fam2_file]) == 0


def test_validate_names_bad_row(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {"n": 2, "m": 2, "F": [[1, 0], [0.5, 0.4]], "r": [0, 1], "c": [0, 0]})
    assert main(["validate", path]) == 1
    assert "row 1 not stochastic" in capsys.readouterr().out


def test_validate_typed_lambda(tmp_path):
    doc = {"n": 2, "m": 2, "r": [0, 1],
           "types": [{"F": [[1, 0], [0, 1]], "c": [0, 0]}, {"F": [[1, 0], [0, 1]], "c": [0, 0.1]}],
           "lambda": [0.5, 0.48]}
    assert main(["validate", write(tmp_path, "t.json", doc)]) == 1
    doc["lambda"] = [0.5, 0.5]
    assert main(["validate", write(tmp_path, "t2.json", doc)]) == 0


def test_validate_ragged_and_mismatch(tmp_path, capsys):
    ragged = write(tmp_path, "r.json", {"F": [[1, 0], [1]], "r": [0, 1], "c": [0, 0]})
    assert main(["validate", ragged]) == 1
    dims = write(tmp_path, "d.json", {"n": 3, "m": 2, "F": [[1, 0], [0, 1]], "r": [0, 1], "c": [0, 0]})
    assert main(["validate", dims]) == 1
    assert "dimension mismatch" in capsys.readouterr().out


def test_validate_warning_still_ok(tmp_path, capsys):
    path = write(tmp_path, "w.json", {"F": [[1, 0], [0, 1]], "r": [0, 1], "c": [0.5, 0.5]})
    assert main(["validate", path]) == 0
    assert "no opt-out" in capsys.readouterr().out


def test_solve_family2(fam2_file, capsys, tmp_path):
    out = tmp_path / "sol.json"
    assert main(["solve", fam2_file, "--delta", "0.25", "--emit", str(out)]) == 0
    assert "psi = 0.75" in capsys.readouterr().out
    assert json.loads(out.read_text())["psi"] == pytest.approx(0.75)


@pytest.mark.parametrize("delta", ["0", "1", "1.5", "-0.1"])
def test_solve_rejects_delta(fam2_file, delta):
    assert main(["solve", fam2_file, "--delta", delta]) == 1


def test_usage_errors_exit_1(fam2_file):
    assert main([]) == 1
    assert main(["solve", fam2_file]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["validate", "/nonexistent/file.json"]) == 1


def test_solve_threads_identical(tmp_path):
    io.dump(gen_random(9, 3, 1, with_opt_out=True), tmp_path / "i.json")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["solve", str(tmp_path / "i.json"), "--delta", "0.2", "--threads", "1", "--emit", str(a)]) == 0
    assert main(["solve", str(tmp_path / "i.json"), "--delta", "0.2", "--threads", "8", "--emit", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def read_bounds(path):
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    return [{k: float(v) for k, v in row.items()} for row in rows]


def test_bounds_family2(fam2_file, tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bounds", fam2_file, "--delta-grid", "0.05:0.95:0.05", "-o", str(out)]) == 0
    rows = read_bounds(out)
    assert len(rows) == 19
    assert list(rows[0]) == ["delta", "opt_delta", "lb", "ub"]
    for row in rows:
        assert row["opt_delta"] == pytest.approx(row["ub"], abs=1e-6)


def test_bounds_sandwich_and_monotone(tmp_path):
    io.dump(gen_random(4, 2, 3, with_opt_out=True), tmp_path / "i.json")
    out = tmp_path / "b.csv"
    assert main(["bounds", str(tmp_path / "i.json"), "--delta-grid", "0.1:0.9:0.1", "-o", str(out)]) == 0
    rows = read_bounds(out)
    for row in rows:
        assert row["lb"] - 1e-6 <= row["opt_delta"] <= row["ub"] + 1e-6
    for prev, cur in zip(rows, rows[1:]):
        assert cur["opt_delta"] <= prev["opt_delta"] + 1e-6


def test_bounds_bad_grid(fam2_file):
    assert main(["bounds", fam2_file, "--delta-grid", "0.1:1.2:0.1"]) == 1
    assert main(["bounds", fam2_file, "--delta-grid", "0.1-0.5"]) == 1


@pytest.mark.parametrize("args", [
    ["tight-lb", "--delta", "0.25", "--n", "10"],
    ["tight-ub", "--delta", "0.25"],
    ["random", "--n", "5", "--m", "3", "--seed", "7", "--opt-out"],
])
def test_gen_round_trip(tmp_path, args):
    out = tmp_path / "g.json"
    assert main(["gen", *args, "-o", str(out)]) == 0
    inst, rep = io.load(out)
    assert rep.ok and not rep.warnings
    assert main(["validate", str(out)]) == 0


def test_gen_random_seeded(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        main(["gen", "random", "--n", "4", "--m", "2", "--seed", "7", "-o", str(path)])
    assert a.read_bytes() == b.read_bytes()


def test_gen_missing_params(tmp_path):
    assert main(["gen", "tight-lb", "--delta", "0.25", "-o", str(tmp_path / "x.json")]) == 1
    assert main(["gen", "tight-lb", "--delta", "0.25", "--n", "2", "-o", str(tmp_path / "x.json")]) == 1


def test_oracle_family2(fam2_file, capsys):
    assert main(["oracle", fam2_file, "--delta", "0.25", "--step", "0.05"]) == 0
    out = capsys.readouterr().out
    assert "grid max psi = 0.75" in out and "(0, 0.25)" in out


def test_oracle_grid_cap(fam2_file):
    assert main(["oracle", fam2_file, "--delta", "0.25", "--step", "0.0001"]) == 1


def test_learn_deterministic(tmp_path):
    path = tmp_path / "t.json"
    fam2 = gen_tight_ub(0.2)
    io.dump(TypedInstance((fam2, fam2), [0.5, 0.5]), path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert main(["learn", str(path), "--T", "500", "--delta", "0.2", "--seed", "3", "-o", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert "# seed=3" in lines
    header = lines.index("round,arm,expected_utility,cum_regret_robust,cum_regret_nonrobust")
    assert len(lines) - header - 1 == 500


def test_learn_bad_epsilon(fam2_file, tmp_path):
    assert main(["learn", fam2_file, "--T", "10", "--delta", "0.2", "--epsilon", "2",
                 "-o", str(tmp_path / "x.csv")]) == 1


def test_io_round_trip_labels(tmp_path):
    inst = Instance(np.eye(2), [0.0, 1.0], [0.0, 0.1], ("rest", "work"), ("fail", "ok"))
    io.dump(inst, tmp_path / "l.json")
    back, rep = io.load(tmp_path / "l.json")
    assert rep.ok and back == inst
    assert back.action_name(1) == "work"


def test_io_rejects_non_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    obj, rep = io.load(path)
    assert obj is None and not rep.ok


def test_internal_error_exit_2(fam2_file, monkeypatch):
    from robust_contracts import cli
    from robust_contracts.robust import RobustSolverError

    def boom(*args, **kwargs):
        raise RobustSolverError("every subproblem LP was infeasible")

    monkeypatch.setattr(cli, "solve_robust", boom)
    assert main(["solve", fam2_file, "--delta", "0.25"]) == 2
