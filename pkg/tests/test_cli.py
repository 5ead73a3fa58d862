import json
import subprocess
import sys

import pytest

from ultrahom.cli import load_structure, main
from ultrahom.structures import cycle3, from_json, to_json


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_transfer_check_example(capsys):
    code, out, _ = run(["check", "transfer", "--graph", "bit", "--max-h", "3", "--universe", "0..7"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["pass"]
    assert len(rep["results"]["invariant"]["queries"]) == 577  # sum over |H| <= 3 of C(8,|H|) 2^|H|


def test_prefix_dot_example(capsys):
    code, out, _ = run(["gen", "prefix", "--of", "transfer(bit)", "--n", "8", "--format", "dot"], capsys)
    assert code == 0 and out.startswith("digraph")
    # nine vertices, one arrow per pair
    assert out.count("->") == 36


def test_enumerate(capsys):
    code, out, _ = run(["gen", "enumerate", "--kind", "tournament", "--n", "4"], capsys)
    assert code == 0 and json.loads(out)["count"] == 4


def test_wreath_gen(capsys):
    code, out, _ = run(["gen", "wreath", "--outer", "C3", "--inner", "empty:2"], capsys)
    X = from_json(out)
    assert code == 0 and X.n == 6 and len(X.arrows) == 12


def test_eval_and_reduct(capsys):
    code, out, _ = run(["eval", "--structure", "C3", "--formula", "E w. R(u,w) & R(w,v)",
                        "--assign", "u=0", "v=2"], capsys)
    assert code == 0 and json.loads(out)["value"] is True
    code, out, _ = run(["reduct", "--structure", "chain:3", "--formula", "R(v,u)"], capsys)
    assert code == 0 and from_json(out).arrows == {(1, 0), (2, 0), (2, 1)}


def test_witness_commands(capsys):
    code, out, _ = run(["witness", "extension", "--of", "bit", "--H", "0,1", "--K", "0"], capsys)
    assert code == 0 and json.loads(out)["witness"] == 5
    code, out, _ = run(["witness", "extension", "--of", "bit", "--H", "0,1,2", "--K", "0,1,2",
                        "--budget", "3"], capsys)
    assert code == 1
    code, out, _ = run(["witness", "density", "--x", "2", "--y", "3", "--model", "S3"], capsys)
    assert code == 0 and json.loads(out)["witness"] == "5/2"
    code, out, _ = run(["witness", "arc", "--x", "0", "--y", "0+1*pi"], capsys)
    assert code == 0 and json.loads(out)["witness"] == "1"


def test_game_commands(capsys):
    code, out, _ = run(["game", "ef", "--left", "C3", "--right", "chain:3", "--rounds", "3"], capsys)
    assert code == 0 and json.loads(out)["winner"] == "spoiler"
    code, out, _ = run(["game", "extend", "--left", "C3", "--right", "chain:3", "--pair", "0=0", "1=1",
                        "--vertex", "2"], capsys)
    assert code == 1 and json.loads(out)["extension"] is None


def test_ultrahomogeneous_check(capsys):
    assert run(["check", "ultrahomogeneous", "--structure", "C3"], capsys)[0] == 0
    code, out, _ = run(["check", "ultrahomogeneous", "--structure", "chain:3"], capsys)
    assert code == 1 and json.loads(out)["counterexample"] == {"domain": [0], "image": [1]}


def test_failing_check_exits_one(capsys):
    code, out, _ = run(["check", "extension", "--of", "bit", "--max-h", "2", "--universe", "0..5",
                        "--budget", "6"], capsys)
    assert code == 1 and json.loads(out)["pass"] is False


@pytest.mark.parametrize("argv", [
    ["check", "transfer", "--graph", "nope"],
    ["check", "transfer", "--universe", "a..b"],
    ["check", "s3", "--sample", "seed:x:3"],
    ["check", "roundtrip", "--below", "0"],
    ["check", "bogus"],
    ["eval", "--structure", "C3", "--formula", "R(u,"],
    ["eval", "--structure", "C3", "--formula", "R(u,v)", "--assign", "u=0"],
    ["eval", "--structure", "missing.json", "--formula", "R(u,v)"],
    ["gen", "prefix", "--of", "bit"],
    ["game", "extend", "--left", "C3", "--right", "C3", "--pair", "a=1"],
    ["witness", "density", "--y", "3"],
    ["witness", "density", "--x", "3", "--y", "3"],
    ["export"],
    [],
])
def test_config_errors_exit_two(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    if err.startswith("{"):
        assert json.loads(err)["error"] == "config"


def test_output_file_and_structure_file(tmp_path, capsys):
    src = tmp_path / "x.json"
    src.write_text(json.dumps(to_json(cycle3())))
    assert load_structure(str(src)) == cycle3()
    out = tmp_path / "out.json"
    assert main(["export", "--structure", str(src), "--output", str(out)]) == 0
    assert from_json(out.read_text()) == cycle3()


def test_export_sample(capsys):
    code, out, _ = run(["export", "--sample", "0,2,3", "--model", "S2"], capsys)
    assert code == 0 and json.loads(out)["order"] == ["2", "3", "0"]
    code, out, _ = run(["export", "--sample", "0,2,3", "--format", "dot"], capsys)
    assert code == 0 and "->" in out


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["check", "s2", "--sample", "seed:3:40", "--per-case", "10", "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ultrahom", "gen", "enumerate", "--kind", "graph", "--n", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 4


def test_bad_precision_env(monkeypatch, capsys):
    monkeypatch.setenv("FORGE_PI_PRECISION", "lots")
    code, _, err = run(["gen", "enumerate", "--kind", "graph", "--n", "2"], capsys)
    assert code == 2 and "FORGE_PI_PRECISION" in json.loads(err)["message"]
    monkeypatch.setenv("FORGE_PI_PRECISION", "80")
    code, out, _ = run(["witness", "arc", "--x", "0", "--y", "0+1*pi"], capsys)
    assert code == 0 and json.loads(out)["witness"] == "1"
