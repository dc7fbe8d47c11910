from __future__ import annotations

import json
import subprocess
import sys

import pytest

from conftest import FIXTURES
from topobounds.cli import main, run

C5 = str(FIXTURES / "c5.json")
C5_VECTORS = str(FIXTURES / "c5_vectors.json")


def results(argv):
    code, report = run(argv)
    assert code == 0, report
    return report["results"]


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


def test_xind_c5():
    out = results(["xind", "--graph", C5])
    assert out["xind"] == 1 and out["bound_chi"] == 3 and out["poset_size"] == 20


def test_chromatic_h6():
    assert results(["chromatic", "--gen", "H:6"])["chi"] == 8


def test_verify_c5_vectors():
    out = results(["verify", "--rep", C5_VECTORS, "--graph", C5])
    assert out["orthogonal"] is True and out["dim"] == 3 and out["independent"] is True


def test_extract_kneser_and_reverify(tmp_path):
    gen = results(["gen", "--gen", "kneser:5,2"])
    graph = write(tmp_path, "kg52.json", gen["graph"])
    chi = results(["chromatic", "--graph", graph])
    coloring = write(tmp_path, "3col.json", chi["coloring"])
    out = results(["extract", "--graph", graph, "--coloring", coloring])
    assert out["t_hat"] >= 3
    assert len(out["X_star"]) == out["t_hat"] // 2 and len(out["Y_star"]) == (out["t_hat"] + 1) // 2
    witness = write(tmp_path, "w.json", out)
    assert results(["verify", "--graph", graph, "--witness", witness])["complete_bipartite"]


def test_report_shape_is_stable():
    a = run(["clique", "--gen", "cycle:5"])[1]
    b = run(["clique", "--gen", "cycle:5"])[1]
    assert set(a) == {"command", "inputs_digest", "version", "results", "timing_sec"}
    a.pop("timing_sec"), b.pop("timing_sec")
    assert a == b


def test_witnesses_reverify(tmp_path):
    od = results(["orthodim", "--gen", "H:4", "--field", "2"])
    assert od["dim"] == 4
    rep = write(tmp_path, "rep.json", od["representation"])
    graph = write(tmp_path, "h4.json", results(["gen", "--gen", "H:4"])["graph"])
    assert results(["verify", "--graph", graph, "--rep", rep])["orthogonal"]
    mr = results(["minrank", "--graph", C5, "--field", "3"])
    assert mr["minrank"] == 3 and "symmetric" in mr
    matrix = write(tmp_path, "m.json", mr["matrix"])
    out = results(["verify", "--graph", C5, "--matrix", matrix])
    assert out["represents"] and out["rank"] == 3


def test_convert_both_directions(tmp_path):
    mr = results(["minrank", "--graph", C5, "--field", "2", "--complement"])
    matrix = write(tmp_path, "m.json", mr["matrix"])
    out = results(["convert", "--direction", "matrix-to-indrep", "--graph", C5, "--matrix", matrix])
    assert out["dim"] == out["rank"] == mr["minrank"]
    rep = write(tmp_path, "r.json", out["representation"])
    back = results(["convert", "--direction", "indrep-to-matrix", "--graph", C5, "--rep", rep])
    assert back["rank"] <= back["dim"]


def test_other_subcommands(tmp_path):
    assert results(["cd2", "--gen", "kneser:5,2"])["cd2"] == 3
    assert results(["indrep", "--graph", C5, "--field", "2"])["dimension"] == 3
    assert results(["local-chromatic", "--graph", C5, "--m-max", "5"])["psi"] == 3
    col = write(tmp_path, "c.json", {"0": 1, "1": 2, "2": 1, "3": 2, "4": 3})
    star = results(["star-check", "--graph", C5, "--coloring", col])
    assert star["satisfied"] and star["independent"]
    cnf = write(tmp_path, "f.cnf", "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n")
    red = results(["reduce-3sat", "--cnf", cnf])
    colored = write(tmp_path, "cg.json", red["colored_graph"])
    assert results(["colorful", "--colored", colored])["exists"]
    assert results(["colorful", "--colored", colored, "--mode", "balanced:2"])["exists"]
    exp = results(["export-cnf", "--gen", "cycle:5", "--k", "3"])
    assert exp["dimacs"].startswith("p cnf 15 ")


def test_fuzz_defaults_are_clean():
    out = results(["fuzz", "--seed", "1", "--count", "40", "--colored-count", "10"])
    assert not out["disagreements"] and not out["balanced_family"]["disagreements"]


def test_exit_codes(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run(["bogus"])
    assert exc.value.code == 64
    assert run(["chromatic", "--gen", "cycle:2"])[0] == 2
    assert run(["xind", "--gen", "kneser:5,2", "--max-poset", "100"])[0] == 3
    assert run(["chromatic", "--graph", str(tmp_path / "missing.json")])[0] == 2
    bad = write(tmp_path, "bad.json", '{"vertices": ["a"], "edges": [["a", "a"]]}')
    assert run(["chromatic", "--graph", bad])[0] == 2
    assert run(["verify", "--graph", C5])[0] == 64


def test_global_flags_after_subcommand():
    code, report = run(["clique", "--gen", "cycle:5", "--time-budget-sec", "5", "-v"])
    assert code == 0 and report["results"]["omega"] == 2


def test_main_prints_json(capsys):
    assert main(["clique", "--gen", "complete:4"]) == 0
    assert json.loads(capsys.readouterr().out)["results"]["omega"] == 4


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "topobounds", "xind", "--graph", C5], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["results"]["xind"] == 1
