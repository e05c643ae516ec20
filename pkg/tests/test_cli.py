import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from planar3ecp import generators as G
from planar3ecp.cli import EXIT_BAD_INPUT, EXIT_BUDGET, EXIT_INFEASIBLE, main
from planar3ecp.connectivity import is_feasible
from planar3ecp.io import load_graph, read_solution, save_graph

from conftest import corners, reqs

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads((resources.files("planar3ecp") / "schema" / "stats.schema.json").read_text())
FIX = resources.files("planar3ecp") / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None), out


def test_docs_schema_matches_packaged_schema():
    assert json.loads((ROOT / "docs" / "stats.schema.json").read_text()) == SCHEMA


@pytest.mark.parametrize("mode", ["solve", "dp", "oracle"])
def test_triangle_modes(capsys, mode):
    code, stats, _ = run(capsys, FIX / "triangle.graph", "--mode", mode)
    assert code == 0
    jsonschema.validate(stats, SCHEMA)
    assert stats["weight"] == "5"


def test_solve_round_trip(capsys, tmp_path):
    out = tmp_path / "sol.txt"
    code, stats, _ = run(capsys, FIX / "grid3x3_corners.graph", "--out", out)
    assert code == 0
    jsonschema.validate(stats, SCHEMA)
    g, r = load_graph(FIX / "grid3x3_corners.graph")
    sol, w = read_solution(out.read_text())
    assert w == sol.weight(g)
    assert str(w) == stats["weight"]
    assert is_feasible(g, sol, r)
    assert stats["oracle"]["status"] == "optimal"


def test_solve_is_deterministic(capsys):
    a = run(capsys, FIX / "grid6x6_corners.graph", "--seed", 7)[2]
    b = run(capsys, FIX / "grid6x6_corners.graph", "--seed", 7)[2]
    assert a == b


def test_dp_equals_oracle(capsys):
    _, dp, _ = run(capsys, FIX / "grid3x3_corners.graph", "--mode", "dp")
    _, orc, _ = run(capsys, FIX / "grid3x3_corners.graph", "--mode", "oracle")
    assert dp["weight"] == orc["weight"]


def test_lab_on_bundled_fixtures(capsys):
    code, stats, _ = run(capsys, "--mode", "lab")
    assert code == 0
    jsonschema.validate(stats, SCHEMA)
    assert stats["violations"] == 0
    assert "minimal_triconnected.graph" in stats["fixtures"]


def test_spanner_stats(capsys, tmp_path):
    out = tmp_path / "sp.txt"
    code, stats, _ = run(capsys, FIX / "grid3x3_corners.graph", "--mode", "spanner-stats", "--out", out)
    assert code == 0
    jsonschema.validate(stats, SCHEMA)
    assert stats["mortar"]["interior_partition"] is True
    assert out.read_text().startswith("planar-graph v1")


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("nonsense\n")
    assert main([str(bad)]) == EXIT_BAD_INPUT
    assert main([str(tmp_path / "missing.graph")]) == EXIT_BAD_INPUT
    assert main([str(FIX / "triangle.graph"), "--epsilon", "2"]) == EXIT_BAD_INPUT
    assert main([str(FIX / "triangle.graph"), "--k", "2"]) == EXIT_INFEASIBLE
    assert main([str(FIX / "grid6x6_corners.graph"), "--mode", "oracle", "--budget", "10"]) == EXIT_BUDGET
    assert main([str(FIX / "grid6x6_corners.graph"), "--mode", "dp", "--width-cap", "2"]) == EXIT_BUDGET
    capsys.readouterr()


def test_stats_file(capsys, tmp_path):
    path = tmp_path / "stats.json"
    assert main([str(FIX / "triangle.graph"), "--mode", "oracle", "--stats", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["weight"] == "5"
