import json
import subprocess
import sys

import pytest

from flipmc.cli import main
from flipmc.cliquewidth import local_cliquewidth
from flipmc.generators import grid


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def grid_file(tmp_path, capsys):
    code, data = run(capsys, "gen", "grid", "--n", "4")
    assert code == 0
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_gen_and_eval(capsys, grid_file):
    code, out = run(capsys, "eval", "--graph", grid_file, "--formula",
                    "exists x. exists y. exists z. E(x,y) & E(y,z) & E(x,z)")
    assert code == 0 and out == {"value": False, "evaluator": "kernel"}
    code, out = run(capsys, "eval", "--graph", grid_file, "--formula", "E(x,y)",
                    "--assign", "x=0", "--assign", "y=1", "--oracle")
    assert out["value"] is True


def test_seed_before_and_after_subcommand(capsys):
    _, a = run(capsys, "--seed", "5", "gen", "random", "--n", "8", "--p", "0.5")
    _, b = run(capsys, "gen", "random", "--n", "8", "--p", "0.5", "--seed", "5")
    _, c = run(capsys, "gen", "random", "--n", "8", "--p", "0.5")
    assert a == b and a != c


def test_interpret_refine_sset_decompose(capsys, grid_file):
    code, out = run(capsys, "interpret", "--graph", grid_file, "--interp", "complement")
    assert code == 0 and len(out["origin"]) == 16
    code, out = run(capsys, "refine", "--graph", grid_file, "--interp", "square", "--r", "1")
    assert code == 0 and out["r_generic"]
    code, out = run(capsys, "sset", "--graph", grid_file, "--interp", "complement")
    assert code == 0 and out["verified"] and out["verified_radius"] == 5
    code, out = run(capsys, "decompose", "--graph", grid_file, "--interp", "power-3", "--r", "2")
    assert code == 0 and all(c["ok"] for c in out["verification"])


def test_vc_and_duality(capsys, tmp_path):
    rel = tmp_path / "rel.json"
    rel.write_text(json.dumps({"a": 3, "b": 3, "pairs": [[0, 0], [0, 1], [0, 2], [1, 1], [1, 2], [2, 2]]}))
    code, out = run(capsys, "vc", "--relation", str(rel))
    assert code == 0 and out["vc_dimension"] == 1 and out["shatter"] <= out["sauer_shelah"]
    code, out = run(capsys, "duality", "--relation", str(rel))
    assert out["found"] and out["side"] == "B"


def test_lcw(capsys, grid_file):
    code, out = run(capsys, "lcw", "--graph", grid_file, "--r", "1")
    assert code == 0 and out["value"] == local_cliquewidth(grid(4), 1, 6).value
    code, out = run(capsys, "lcw", "--graph", grid_file, "--r", "3")
    assert code == 2 and "vertex" in out["error"]
    code, out = run(capsys, "lcw", "--graph", grid_file, "--r", "3", "--heuristic")
    assert code == 0 and out["upper_bounds"]


def test_mc(capsys, grid_file, tmp_path):
    code, out = run(capsys, "mc", "--graph", grid_file, "--sentence-text",
                    "forall x. exists y. E(x,y)", "--s", "0")
    assert code == 0 and out["answer"] is True and out["candidates_run"] == 2
    code, h = run(capsys, "interpret", "--graph", grid_file, "--interp", "complement")
    hfile = tmp_path / "h.json"
    hfile.write_text(json.dumps(h["H"]))
    code, out = run(capsys, "mc", "--graph", str(hfile), "--sentence-text",
                    "exists x. exists y. exists z. E(x,y) & E(y,z) & E(x,z)", "--mode", "witness",
                    "--pre-image", grid_file, "--interp", "complement")
    assert code == 0 and out["answer"] == out["oracle_answer"] is True and out["witness_is_flip"]


def test_suite(capsys, tmp_path):
    corpus = tmp_path / "c.json"
    corpus.write_text(json.dumps([{"name": "p", "kind": "path", "params": {"n": 20}, "interp": "square"}]))
    code, out = run(capsys, "suite", "--corpus", str(corpus), "--checks", "refine,sset")
    assert code == 0 and out["failed"] == 0 and out["passed"] == 4
    code, out = run(capsys, "suite", "--corpus", str(corpus), "--checks", "sset", "--planted")
    assert code == 1 and out["failures"] == ["planted/red-ends:sset:r=1"]
    corpus.write_text("[]")
    code, out = run(capsys, "suite", "--corpus", str(corpus))
    assert code == 0 and out["warnings"]


@pytest.mark.parametrize("argv", [
    ["eval", "--graph", "/nonexistent.json", "--formula", "true"],
    ["gen", "grid"],
    ["suite", "--checks", "bogus"],
])
def test_usage_errors(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 2 and "error" in out


def test_parse_error_exit_code(capsys, grid_file):
    code, out = run(capsys, "eval", "--graph", grid_file, "--formula", "E(x,")
    assert code == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "flipmc.cli", "gen", "path", "--n", "3"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["n"] == 3
