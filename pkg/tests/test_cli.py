import json
import subprocess
import sys
from pathlib import Path

import pytest

from qmeasure.cli import main, parse_function, parse_measure, UsageError

DATA = Path(__file__).resolve().parent.parent / "data"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_integrate_destructive(capsys):
    code, out, _ = run(["integrate", "--measure", "destructive:0.75", "--function", "x",
                        "--domain", "0,1"], capsys)
    rec = json.loads(out)
    assert code == 0
    assert abs(float(rec["value"]) - 0.4375) <= 1e-6
    assert set(rec) == {"value", "error_estimate", "evaluations", "measure", "function"}


def test_integrate_constant(capsys):
    code, out, _ = run(["integrate", "--measure", "qlebesgue", "--function", "const:1",
                        "--domain", "0,0.5"], capsys)
    assert code == 0 and json.loads(out)["value"] == "0.25"
    code, out, _ = run(["integrate", "--measure", "qlebesgue", "--function", "const:0",
                        "--domain", "0,1"], capsys)
    assert json.loads(out)["value"] == "0"


def test_integrate_finite_table(capsys):
    code, out, _ = run(["integrate", "--input", str(DATA / "quantum_coin.json"),
                        "--function", '{"values": ["2","1","1","0"]}'], capsys)
    rec = json.loads(out)
    assert code == 0 and rec["value"] == "5/8" and rec["naive"] == "3/8"


@pytest.mark.parametrize("argv", [
    ["integrate", "--function", "sin"],
    ["integrate", "--function", "x", "--measure", "gaussian"],
    ["integrate", "--function", "x", "--domain", "0"],
    ["integrate", "--function", "x", "--tol", "-1"],
    ["integrate", "--function", "x", "--measure", "destructive:1/4"],
    ["check", "--input", "/nonexistent.json"],
    ["check", "--input", str(DATA / "quantum_coin.json"), "--suite", "bogus"],
    ["demo", "bogus"],
    ["table", "bogus"],
    ["table", "monomial", "--n", "a..b"],
])
def test_input_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["integrate", "--format", "yaml"])
    assert e.value.code == 2


def test_tolerance_failure_exit_3(capsys):
    code, _, err = run(["integrate", "--function", "x^6", "--tol", "1e-16"], capsys)
    assert code == 3


def test_check_suites(capsys):
    code, out, _ = run(["check", "--input", str(DATA / "quantum_coin.json"), "--suite",
                        "grade2"], capsys)
    assert code == 0 and out == "grade2: PASS\n"
    code, out, _ = run(["check", "--input", str(DATA / "cube.json")], capsys)
    assert code == 1 and "witness={'A': [0], 'B': [1], 'C': [2]}" in out
    code, out, _ = run(["check", "--input", str(DATA / "destructive_pairs_1_1.json"),
                        "--suite", "regularity"], capsys)
    assert out == "regularity: regular=true completely_regular=false\n"
    code, out, _ = run(["check", "--input", str(DATA / "decoherence.json"), "--suite",
                        "decoherence"], capsys)
    assert code == 0
    code, out, _ = run(["check", "--input", str(DATA / "pair_matrix.json"), "--suite", "all",
                        "--format", "json"], capsys)
    assert code == 0 and len(json.loads(out)) == 5


@pytest.mark.parametrize("name", ["quantum-coin", "naive-failure", "grade2-integral-gap",
                                  "radon-nikodym", "surprise-additivity", "destructive-pairs"])
def test_demos(name, capsys):
    code, out, _ = run(["demo", name], capsys)
    assert code == 0
    assert "mismatch\n" not in out


def test_demo_lines(capsys):
    _, out, _ = run(["demo", "quantum-coin"], capsys)
    assert "integral of heads count: 5/8 vs expected 5/8: match" in out
    _, out, _ = run(["demo", "grade2-integral-gap"], capsys)
    assert "5/4 vs expected 3/2: mismatch-as-expected" in out


def test_table_monomial_csv(capsys):
    code, out, _ = run(["table", "monomial", "--n", "0..6", "--y", "1"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n,y,computed,closed_form,abs_error"
    assert len(lines) == 8
    assert max(float(line.split(",")[-1]) for line in lines[1:]) <= 1e-6


def test_table_empty_sweep(capsys):
    code, out, _ = run(["table", "monomial", "--n", ""], capsys)
    assert code == 0 and out == "n,y,computed,closed_form,abs_error\n"


def test_table_ftc_error_decreases(capsys):
    code, out, _ = run(["table", "ftc", "--function", "x^2", "--h", "0.1,0.01,0.001",
                        "--y", "0.5", "--tol", "1e-11"], capsys)
    errs = [float(line.split(",")[-1]) for line in out.splitlines()[1:]]
    assert code == 0 and errs[0] > errs[1] > errs[2]
    assert abs(errs[0] / errs[1] - 100) < 5


def test_output_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        main(["table", "monomial", "--n", "0..2", "--y", "1/2,1", "--output", str(p)])
    assert a.read_bytes() == b.read_bytes()
    assert b"\r\n" not in a.read_bytes()


def test_function_language():
    assert parse_function("x^3")(0.5) == 0.125
    assert parse_function("x^2+x")(1) == 2
    assert parse_function("indicator:1/4,3/4:2")(0.5) == 2
    f = parse_function('piecewise:[{"from":"0","to":"1/2","expr":"x"},'
                       '{"from":"1/2","to":"1","expr":"const:1/2"}]')
    assert f(0.25) == 0.25 and f(0.75) == 0.5 and f.is_monotone()
    with pytest.raises(UsageError):
        parse_function('piecewise:[{"from":"0","to":"1/2","expr":"x"}]')
    assert parse_measure("destructive:3/4").shift == 0.75
    assert parse_measure("destructive").name == "destructive:3/4"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "qmeasure", "demo", "quantum-coin", "--format",
                        "json"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["rows"][1]["computed"] == "5/8"
