import json
import subprocess
import sys
from fractions import Fraction

import pytest

from pellforge.builder import EpzFamily
from pellforge.cli import main, serialize, to_jsonable
from pellforge.data import letter_family
from pellforge.padic import PadicPoint
from pellforge.recog import rational_reconstruct
from pellforge.system import PolySystem


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def case1_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("sys") / "r1.json"
    assert main(["reduce", "--case", "I", "-o", str(path)]) == 0
    return path


def test_solve_case1(capsys):
    code, out, _ = run(capsys, "--json", "solve-case1")
    assert code == 0
    data = json.loads(out)
    assert data["isolated"] == [{"x0": "311/64", "x1": "61/8", "x2": "9/2", "q0": "11/4"}]
    full = data["back_substituted"][0]
    assert full["b0"] == "-3720087/131072" and full["q1"] == "3"


def test_verify_corpus_exit_codes(capsys):
    assert run(capsys, "verify", "--corpus")[0] == 0
    code, _, err = run(capsys, "verify", "--misprint", "X3=z^3 + 1")
    assert code == 1 and json.loads(err)["error"] == "math"


@pytest.mark.parametrize("argv", [
    ["build", "--sig", "9,9,9,9,9"],
    ["build", "--sig", "1,1,2,6,7"],
    ["build", "--sig", "banana"],
    ["nonsense"],
    ["reduce"],
    ["rho", "--x", "10"],
    ["algdep", "--value", "1/17", "-p", "17"],
    ["--jobs", "0", "solve-case1"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2


def test_build_json(capsys):
    code, out, _ = run(capsys, "build", "--sig", "0,1,2,4,5", "--json")
    data = json.loads(out)
    assert code == 0 and data["unknown_count"] == data["equation_count"] == "12"
    sys_ = PolySystem.from_json(data["system"])
    assert len(sys_.eqs) == 12


def test_scan_lift_roundtrip(capsys, case1_file, tmp_path):
    code, out, _ = run(capsys, "--json", "scan", str(case1_file), "-p", "7", "--status", "Invertible")
    assert code == 0
    sols = json.loads(out)
    shadow = {"x0": "3", "x1": "5", "x2": "1", "q0": "1"}
    assert any(s["coords"] == shadow for s in sols)
    code, out, _ = run(capsys, "--json", "lift", str(case1_file), "--seed", "3,5,1,1", "-p", "7", "-K", "32")
    assert code == 0
    lifted = PadicPoint.from_json(json.loads(out)["point"])
    rec = [rational_reconstruct(c, lifted.modulus) for c in lifted.coords]
    assert rec == [Fraction(311, 64), Fraction(61, 8), Fraction(9, 2), Fraction(11, 4)]


def test_scan_is_job_independent(capsys, case1_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["scan", str(case1_file), "-p", "11", "--jobs", "1", "-o", str(a), "--json"]) == 0
    assert main(["scan", str(case1_file), "-p", "11", "--jobs", "3", "-o", str(b), "--json"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_lift_math_failure(capsys, case1_file):
    code, _, err = run(capsys, "lift", str(case1_file), "--seed", "0,0,0,0", "-p", "7")
    assert code == 1


def test_pell_and_rho(capsys):
    code, out, _ = run(capsys, "--json", "pell", "--count", "3")
    recs = json.loads(out)
    assert code == 0 and [r["t"] for r in recs] == ["1", "-15", "529"]
    assert recs[1]["x"] == "35334750"
    code, out, _ = run(capsys, "rho", "--x", "35334750", "--A", "132", "--B", "17424", "--json")
    assert code == 0 and json.loads(out)["rho"].startswith("5.339")


def test_algdep(capsys):
    code, out, _ = run(capsys, "algdep", "--value", "311/64", "-p", "17", "-K", "40", "--dmax", "3", "--json")
    cands = json.loads(out)
    assert code == 0 and cands[0]["coeffs"] == ["-311", "64"]


def test_appendix(capsys):
    code, out, _ = run(capsys, "--json", "appendix")
    steps = {s["name"]: s["value"] for s in json.loads(out)}
    assert code == 0 and steps["specialized_B"] == "-1536*t - 3968"


def test_serialization_roundtrips(case1_file):
    sys_ = PolySystem.loads(case1_file.read_text())
    assert PolySystem.from_json(json.loads(serialize(sys_.to_json()))).eqs == sys_.eqs
    pt = PadicPoint(7, 3, (1, 2, 3), ("a", "b", "c"))
    assert PadicPoint.from_json(json.loads(serialize(pt))) == pt
    fam = letter_family()
    assert EpzFamily.from_strings(**fam.to_json()) == fam
    assert to_jsonable({"n": 10**40, "q": Fraction(1, 3)}) == {"n": str(10**40), "q": "1/3"}


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "pellforge.cli", "build", "--sig", "9,9,9,9,9"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert json.loads(proc.stderr)["error"] == "usage"
