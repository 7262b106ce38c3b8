from __future__ import annotations

import json
import subprocess
import sys

import pytest

from lidstone.cli import main
from lidstone.polycore import MultiPoly


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_basis(capsys):
    code, doc, _ = run(capsys, "basis", "-n", "1", "-t", "2", "-i", "1")
    assert code == 0
    assert MultiPoly.from_json(doc) == MultiPoly(1, {(1,): "-1/6", (3,): "1/6"})
    assert doc["settings"]["degree_cap"] == 8
    code, doc, _ = run(capsys, "basis", "-n", "2", "-t", "0,0", "-i", "0")
    assert MultiPoly.from_json(doc) == MultiPoly(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1})


def test_basis_errors(capsys):
    code, _, err = run(capsys, "basis", "-n", "2", "-t", "1,0", "-i", "1")
    assert code == 1 and "admissible" in err
    code, _, _ = run(capsys, "basis", "-n", "1", "-t", "4", "-i", "0", "--degree-cap", "4")
    assert code == 1


def test_basis_cap_exceeded_exit_code(capsys, monkeypatch):
    import lidstone.cli as cli
    from lidstone.basis import NoSolutionWithinCapError

    def fail(*args, **kwargs):
        raise NoSolutionWithinCapError("no basis polynomial within the cap")

    monkeypatch.setattr(cli, "lidstone_basis", fail)
    code, _, err = run(capsys, "basis", "-n", "1", "-t", "2", "-i", "0")
    assert code == 2 and "cap" in err
    with pytest.raises(SystemExit) as exc:
        main(["basis", "-n", "1"])
    assert exc.value.code == 1


def test_reconstruct(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"n": 2, "entries": []}))
    code, doc, _ = run(capsys, "reconstruct", str(empty), "--degree-bound", "4")
    assert code == 0 and doc["terms"] == [] and doc["degree"] is None

    f_z = tmp_path / "z.json"
    f_z.write_text(json.dumps({"n": 1, "entries": [{"t": [0], "i": 0, "value": "0"},
                                                   {"t": [0], "i": 1, "value": "1"}]}))
    code, doc, _ = run(capsys, "reconstruct", str(f_z), "--degree-bound", "3")
    assert MultiPoly.from_json(doc) == MultiPoly.var(1, 1)

    rational = tmp_path / "r.json"
    rational.write_text(json.dumps({"n": 1, "frame": {"points": [["0"], ["1/3"]]},
                                    "entries": [{"t": [0], "i": 1, "value": "1"},
                                                {"t": [2], "i": 0, "value": "2"}]}))
    code, doc, _ = run(capsys, "reconstruct", str(rational), "--degree-bound", "3")
    assert code == 0
    assert {t["coef"] for t in doc["terms"]} == {"25/9", "1", "-1"}


def test_reconstruct_failures(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 1, "entries": [{"t": [2], "i": 0, "value": "1"},
                                                   {"t": [2], "i": 1, "value": "2"}]}))
    assert run(capsys, "reconstruct", str(bad), "--degree-bound", "2")[0] == 2
    assert run(capsys, "reconstruct", str(tmp_path / "missing.json"), "--degree-bound", "2")[0] == 3
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    assert run(capsys, "reconstruct", str(garbled), "--degree-bound", "2")[0] == 1
    singular = tmp_path / "singular.json"
    singular.write_text(json.dumps({"n": 1, "frame": {"points": [["1"], ["1"]]}, "entries": []}))
    assert run(capsys, "reconstruct", str(singular), "--degree-bound", "2")[0] in (1, 2)


def test_random_corpus_seed(capsys, monkeypatch):
    code, a, _ = run(capsys, "reconstruct", "--random-corpus", "6", "--seed", "3")
    assert code == 0 and a["pass"] and a["settings"]["seed"] == 3
    monkeypatch.setenv("LIDSTONE_SEED", "3")
    _, b, _ = run(capsys, "reconstruct", "--random-corpus", "6", "--seed", "99")
    assert a == b


def test_verify(capsys):
    code, doc, _ = run(capsys, "verify", "--example", "1", "-n", "2", "--max-norm", "8", "--predicate", "zero")
    assert code == 0 and doc["pass"] and doc["settings"]["tol"] == 1e-9 and doc["settings"]["nodes"] == 64
    code, doc, _ = run(capsys, "verify", "--example", "3", "-n", "1", "--predicate", "integer",
                       "--max-norm", "10")
    assert code == 0 and doc["pass"]
    code, doc, _ = run(capsys, "verify", "--example", "2", "-n", "3", "--g=x1+2*x2", "--g=x1", "--g=-x1",
                       "--all-even", "--max-norm", "4")
    assert code == 2 and not doc["pass"]
    assert {"t": [1, 1, 0], "i": 2, "value": "2*pi", "exact": True, "pass": False} in doc["witnesses"]


def test_verify_expression_file(capsys, tmp_path):
    src = tmp_path / "f.txt"
    src.write_text("sin(pi*(x1 + x2))")
    code, doc, _ = run(capsys, "verify", "--expr-file", str(src), "--max-norm", "6", "--method", "contour",
                       "--table")
    assert code == 0 and doc["method"] == "contour"
    bad = tmp_path / "g.txt"
    bad.write_text("sin(")
    assert run(capsys, "verify", "--expr-file", str(bad))[0] == 1


def test_growth(capsys):
    code, doc, _ = run(capsys, "growth", "--expr", "5")
    assert code == 0 and doc["condition_1_1"]["verdict"] == "satisfied"
    assert doc["settings"]["grid"] == 128 and doc["settings"]["r_max"] == 200.0
    code, doc, _ = run(capsys, "growth", "--expr", "sin(pi*x1)")
    assert abs(doc["type_estimates"][0]["type"] - 3.14159) < 0.1
    code, doc, _ = run(capsys, "growth", "--example", "3", "-n", "1")
    assert doc["condition_1_1"]["verdict"] == "violated"


def test_expand(capsys, tmp_path):
    poly = tmp_path / "p.json"
    poly.write_text(json.dumps(MultiPoly(2, {(2, 1): 1, (0, 0): -3}).to_json()))
    code, doc, _ = run(capsys, "expand", "--expr-file", str(poly), "-T", "4")
    assert code == 0 and doc["residual"] == 0 and doc["warnings"] == []
    code, doc, _ = run(capsys, "expand", "--expr", "sinh(x1)/sinh(1)", "-T", "20")
    assert doc["residual"] < 1e-8
    code, doc, err = run(capsys, "expand", "--expr", "sin(pi*x1)", "-T", "8")
    assert doc["partial_sum"]["terms"] == [] and abs(doc["residual"] - 1) < 1e-9
    assert "type not < pi" in err and doc["warnings"]


def test_threshold(capsys):
    code, doc, _ = run(capsys, "threshold", "--A", "0", "--eta", "0.5")
    assert code == 0 and doc["T0"] == 1
    assert run(capsys, "threshold", "--A", "1", "--eta", "1.5")[0] == 1


def test_output_file_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        assert main(["growth", "--expr", "x1^3 - 2", "-o", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_console_entry_points():
    res = subprocess.run([sys.executable, "-m", "lidstone", "threshold", "--A", "1", "--eta", "0.1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["T0"] == 7
    res = subprocess.run([sys.executable, "-m", "lidstone", "nonsense"], capture_output=True, text=True)
    assert res.returncode == 1
