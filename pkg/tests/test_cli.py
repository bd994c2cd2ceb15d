import json
import subprocess
import sys

from permclone.cli import run
from permclone.gates import Gate, fredkin_gate, toffoli_gate


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_respects_exit_codes(capsys):
    code, out, _ = call(capsys, "check", "respects", "--gate", "fredkin", "--weight", "ones")
    assert code == 0 and json.loads(out)["verdict"] is True
    code, out, _ = call(capsys, "check", "respects", "--gate", "toffoli", "--weight", "ones")
    assert code == 1 and json.loads(out)["verdict"] is False


def test_aut_square(capsys):
    code, out, _ = call(capsys, "aut", "--relation", "square", "--arity", "1")
    data = json.loads(out)
    assert code == 0 and data["order"] == "8"


def test_usage_errors_are_json(capsys):
    code, _, err = call(capsys, "aut", "--relation", "square", "--arity", "1", "--bogus")
    assert code == 2 and json.loads(err)["error"] == "usage"
    code, _, err = call(capsys, "gate", "show", "nonsense")
    assert code == 2 and "error" in json.loads(err)
    code, _, err = call(capsys, "census2", "--max-arity", "2")
    assert code == 2


def test_resource_limit_exit_code(capsys):
    code, _, err = call(capsys, "aut", "--relation", "neq:2", "--arity", "5", "--max-points", "16")
    assert code == 3 and json.loads(err)["error"] == "resource_limit"


def test_gate_operations(capsys, tmp_path):
    code, out, _ = call(capsys, "gate", "compose", "toffoli", "toffoli")
    assert code == 0 and Gate.from_json(json.loads(out)) == Gate(2, 3, tuple(range(8)))
    path = tmp_path / "f.json"
    path.write_text(json.dumps(fredkin_gate().to_json()))
    code, out, _ = call(capsys, "gate", "invert", str(path))
    assert Gate.from_json(json.loads(out)) == fredkin_gate()
    out_file = tmp_path / "o.json"
    code, out, _ = call(capsys, "gate", "show", "toffoli", "-o", str(out_file))
    assert code == 0 and Gate.from_json(json.loads(out_file.read_text())) == toffoli_gate()


def test_clone_commands(capsys):
    code, out, _ = call(capsys, "clone", "slice", "--spec", "census:A", "--arity", "3")
    assert code == 0 and json.loads(out)["order"] == "1344"
    code, out, _ = call(capsys, "clone", "member", "--spec", "census:U", "--gate", "not")
    assert code == 0
    code, out, _ = call(capsys, "clone", "compare", "--spec", "census:A", "--spec", "census:top",
                        "--arity-bound", "3")
    assert json.loads(out)["verdict"] == "less"
    code, out, _ = call(capsys, "clone", "borrow-check", "--spec", "census:P0", "--arity-bound", "2")
    assert code == 0
    code, out, _ = call(capsys, "clone", "ancilla-check", "--spec", "census:P0", "--arity-bound", "2")
    data = json.loads(out)
    assert code == 1 and any("witness" in r for r in data["rows"])
    code, out, _ = call(capsys, "clone", "factoring-check", "--relation", "neq:3", "--n", "1", "--m", "1")
    assert code == 0


def test_weight_derive(capsys):
    code, out, _ = call(capsys, "weight", "derive", "counting", "--relation", "iota:3:3",
                        "--position", "3")
    # (0,0,x) always has a repeat; (0,1,x) and (0,2,x) only for x in the pair
    assert code == 0 and json.loads(out)["values"][:3] == [3, 2, 2]
    code, out, _ = call(capsys, "weight", "derive", "hom", "--weight", "absorbing",
                        "--hom", "annihilate_inf")
    assert json.loads(out)["values"] == [1, 1, 0]


def test_quotient(capsys):
    spec = json.dumps({"q": 4, "n": 2, "map": [0, 4, 8, 12, 1, 5, 9, 13, 2, 6, 10, 14, 3, 7, 11, 15]})
    code, out, _ = call(capsys, "quotient", "--gate", spec, "--partition", "01|23")
    assert code == 0 and Gate.from_json(json.loads(out)).map == (0, 2, 1, 3)


def test_census_outputs(capsys, tmp_path):
    dot = tmp_path / "c.dot"
    code, out, _ = call(capsys, "census2", "--max-arity", "3", "--dot", str(dot), "--verify")
    data = json.loads(out)
    assert code == 0 and data["count"] == 13 and len(data["edges"]) == 21
    assert dot.read_text().count(" -- ") == 21


def test_outputs_are_deterministic(capsys):
    argv = ["clone", "borrow-check", "--relation", "neq:2", "--arity-bound", "3",
            "--regime", "sampled", "--samples", "50", "--seed", "9"]
    _, a, _ = call(capsys, *argv)
    _, b, _ = call(capsys, *argv)
    assert a == b


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "permclone.cli", "aut", "--relation", "square",
                           "--arity", "1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["order"] == "8"
