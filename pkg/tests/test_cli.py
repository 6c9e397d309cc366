import json
import subprocess
import sys

import numpy as np
import pytest

from twoface import cli
from twoface.errors import InvariantViolation, ProbabilisticFailure
from twoface.graph_model import PlainGraph, dump_ab_instance, dump_instance
from twoface.oracle import random_two_face, template_annulus


@pytest.fixture
def instance(tmp_path):
    g, layout = template_annulus(3, 1, 2, 4, weights=lambda e: 1 + e % 3)
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(dump_instance(g, layout)))
    return path


@pytest.fixture
def ab_instance(tmp_path):
    g = PlainGraph(tuple(range(4)), ((0, 1, 2), (1, 2, 1), (2, 3, 4), (3, 0, 1)), (0, 2), (1, 3))
    path = tmp_path / "ab.json"
    path.write_text(json.dumps(dump_ab_instance(g, 2)))
    return path


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = cli.main([*argv, "-o", str(out)])
    return code, json.loads(out.read_text()), out


def test_solve_writes_report(instance, tmp_path):
    code, doc, _ = run(["solve", str(instance)], tmp_path)
    assert code == 0 and doc["exit_code"] == 0
    rep = doc["report"]
    assert rep["status"] == "solved" and rep["weight"] == 6 and rep["verified"]
    assert "matrices" not in doc


def test_solve_and_oracle_agree(instance, ab_instance, tmp_path):
    _, solved, _ = run(["solve", str(instance)], tmp_path, "a.json")
    _, brute, _ = run(["oracle", str(instance)], tmp_path, "b.json")
    assert solved["report"]["weight"] == brute["weight"]
    _, solved, _ = run(["solve-ab", str(ab_instance)], tmp_path, "c.json")
    _, brute, _ = run(["oracle", str(ab_instance)], tmp_path, "d.json")
    assert solved["report"]["weight"] == brute["weight"] == 2
    assert brute["optimal_count"] >= 1


def test_dump_matrices(instance, tmp_path):
    _, doc, _ = run(["solve", str(instance), "--dump-matrices"], tmp_path)
    assert doc["matrices"]["M"] == [[1, 0, 1], [1, 1, 0], [0, 1, 1]]
    assert doc["matrices"]["det"] == 2


def test_verify_matrices_reports_each_check(tmp_path):
    code, doc, _ = run(["verify-matrices", "--k1", "3", "--k2", "3"], tmp_path)
    assert code == 0 and doc["result"]["passed"]
    _, doc, _ = run(["verify-matrices", "--k1", "5", "--k2", "1"], tmp_path)
    names = {c["name"]: c["passed"] for c in doc["result"]["checks"]}
    assert names["squareness"] and not names["cancellation"]
    code, doc, _ = run(["verify-matrices", "--k1", "2", "--k2", "1"], tmp_path)
    assert code == 2


def test_extract_demo(tmp_path):
    code, doc, _ = run(["extract-demo", "--c", "5", "--seed", "3"], tmp_path)
    assert code == 0 and doc["exact"]


def test_describe(instance, tmp_path):
    code, doc, _ = run(["describe", str(instance)], tmp_path)
    assert code == 0 and doc["target"]["q"] == 1


def test_input_errors(instance, tmp_path):
    code, doc, _ = run(["solve", str(tmp_path / "missing.json")], tmp_path)
    assert code == 2 and doc["error"] == "InstanceError"
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["solve", str(bad)], tmp_path)[0] == 2
    doc = json.loads(instance.read_text())
    doc["terminals"]["K2"].append(doc["terminals"]["K1"].pop())
    moved = tmp_path / "moved.json"
    moved.write_text(json.dumps(doc))
    code, out, _ = run(["solve", str(moved)], tmp_path)
    assert code == 2 and out["code"]


def test_not_found_exit_code(tmp_path):
    rng = np.random.default_rng(0)
    g, layout = random_two_face(rng, 3, 1, rings=2, spokes=5, deletions=4, chords=0)
    path = tmp_path / "blocked.json"
    path.write_text(json.dumps(dump_instance(g, layout)))
    code, doc, _ = run(["solve", str(path), "--trials", "2"], tmp_path)
    assert code == 1 and doc["report"]["status"] == "not_found" and not doc["report"]["definitive"]


@pytest.mark.parametrize("exc,code", [(ProbabilisticFailure("x"), 3), (InvariantViolation("x"), 4)])
def test_failure_exit_codes(instance, tmp_path, monkeypatch, exc, code):
    def boom(*args, **kwargs):
        raise exc

    monkeypatch.setattr("twoface.solver.solve", boom)
    got, doc, _ = run(["solve", str(instance)], tmp_path)
    assert got == code and doc["exit_code"] == code


def test_reports_are_byte_identical(tmp_path):
    rng = np.random.default_rng(4)
    g, layout = random_two_face(rng, 3, 3)
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(dump_instance(g, layout)))
    outs = []
    for i, jobs in enumerate(("1", "1", "2")):
        _, _, out = run(["solve", str(path), "--seed", "5", "--jobs", jobs], tmp_path, f"r{i}.json")
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_jobs_default(monkeypatch):
    monkeypatch.setenv(cli.JOBS_ENV, "3")
    assert cli.default_jobs() == 3
    monkeypatch.delenv(cli.JOBS_ENV)
    assert cli.default_jobs() >= 1


def test_module_entry_point(instance):
    res = subprocess.run([sys.executable, "-m", "twoface", "solve", str(instance)],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["report"]["weight"] == 6
    assert "elapsed" in res.stderr
