import argparse
import json
import subprocess
import sys

import pytest

from multigamma.cli import main, parse_complex, parse_vector


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def as_c(pair):
    return complex(*pair)


class TestLiterals:
    @pytest.mark.parametrize("text,want", [("0.25+0.5i", 0.25 + 0.5j), ("-1", -1), ("2i", 2j),
                                           ("1e-3-2.5e1i", 1e-3 - 25j), ("0+1i", 1j), ("3.", 3)])
    def test_accepts(self, text, want):
        assert parse_complex(text) == want

    @pytest.mark.parametrize("text", ["", "1 + 2i", "1+2j", "abc", "1+", "i2", "1..2", "1+2i3"])
    def test_rejects(self, text):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_complex(text)

    def test_vector(self):
        assert parse_vector("1,0+1i") == [1, 1j]


class TestEval:
    def test_theta0_matches_product(self, capsys):
        from test_gammafuncs import theta_oracle
        code, out = run(capsys, "eval", "theta0", "--z", "0.25+0.5i", "--tau", "0+1i", "--format", "json")
        doc = json.loads(out.out)
        assert code == 0 and doc["schema"] == 1
        assert abs(as_c(doc["value"]) - theta_oracle(0.25 + 0.5j, 1j)) < 1e-12
        assert doc["error_bound"] < 1e-12 and doc["representation"]

    def test_bernoulli_midpoint(self, capsys):
        code, out = run(capsys, "eval", "bernoulli", "--r", "1", "--n", "1", "--z", "0.5", "--omega", "1",
                        "--format", "json")
        assert code == 0 and as_c(json.loads(out.out)["value"]) == 0

    def test_lattice_zero(self, capsys):
        code, out = run(capsys, "eval", "theta0", "--z", "0", "--tau", "0+1i", "--format", "json")
        doc = json.loads(out.out)
        assert code == 0 and as_c(doc["value"]) == 0
        assert "lattice_zero" in doc["flags"]

    @pytest.mark.parametrize("argv", [
        ("q_factorial", "--x", "0.3", "--q", "0.5i"),
        ("q_factorial", "--x", "0.3", "--q", "0.5i", "--method", "product"),
        ("q_polylog", "--x", "0.3", "--q", "0.5i"),
        ("elliptic_gamma", "--z", "0.3+0.4i", "--tau", "1i", "--sigma", "2i"),
        ("G_r", "--r", "2", "--z", "0.3+0.4i", "--tau", "1i,2i,0.5+1i"),
        ("S_r_product", "--r", "2", "--z", "0.4+0.3i", "--omega", "1,1i"),
        ("S_r_product", "--r", "2", "--z", "0.4+0.3i", "--omega", "1,1i", "--variant", "lower_40"),
        ("S_r_integral", "--r", "2", "--z", "0.8+0.1i", "--omega", "1,1+1i"),
        ("psi2", "--z", "1"),
    ])
    @pytest.mark.parametrize("fmt", ["json", "csv", "human"])
    def test_functions(self, capsys, argv, fmt):
        code, out = run(capsys, "eval", *argv, "--format", fmt)
        assert code == 0 and out.out.strip()

    def test_psi2_value(self, capsys):
        import cmath
        _, out = run(capsys, "eval", "psi2", "--z", "1", "--format", "json")
        assert abs(as_c(json.loads(out.out)["value"]) - cmath.exp(1j * cmath.pi / 12)) < 1e-10

    def test_domain_error(self, capsys):
        code, out = run(capsys, "eval", "S_r_integral", "--r", "2", "--z", "5", "--omega", "1,1+1i")
        assert code == 3 and out.err

    def test_missing_parameter(self, capsys):
        code, _ = run(capsys, "eval", "theta0", "--z", "0.1")
        assert code == 2

    def test_malformed_literal(self, capsys):
        code, out = run(capsys, "eval", "theta0", "--z", "0.1+", "--tau", "1i")
        assert code == 2 and "0.1+" in out.err


class TestCheck:
    def test_jacobi(self, capsys):
        code, out = run(capsys, "check", "jacobi", "--z", "0.3+0.1i", "--tau", "0+1i", "--format", "json")
        rep = json.loads(out.out)["report"]
        assert code == 0 and rep["pass"] and rep["rel_residual"] < 1e-10

    def test_theorem_alias(self, capsys):
        code, _ = run(capsys, "check", "thm4.1", "--r", "2", "--z", "0.4+0.3i", "--omega", "1,0+1i")
        assert code == 0

    def test_inadmissible(self, capsys):
        code, _ = run(capsys, "check", "fv", "--z", "0.3+0.2i", "--tau", "0.5i", "--sigma", "1i")
        assert code == 3

    def test_failure_exit(self, capsys):
        code, _ = run(capsys, "check", "jacobi", "--z", "0.3+0.1i", "--tau", "1i", "--prefactor-shift", "1e-3")
        assert code == 1

    def test_unknown_identity(self, capsys):
        code, _ = run(capsys, "check", "nope", "--z", "0.1")
        assert code == 2

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "rep.json"
        code, out = run(capsys, "check", "jacobi", "--z", "0.3+0.1i", "--tau", "1i", "--format", "json",
                        "--out", str(path))
        assert code == 0 and out.out == ""
        assert json.loads(path.read_text())["report"]["pass"]


class TestSweep:
    def test_fv(self, capsys):
        code, out = run(capsys, "sweep", "fv", "--count", "50", "--seed", "7", "--format", "json")
        summary = json.loads(out.out)["summary"]
        assert code == 0 and summary["pass_count"] == 50 and summary["seed"] == 7

    def test_byte_identical(self, capsys):
        argv = ("sweep", "thm4.2", "--r", "1", "--count", "100", "--seed", "1", "--format", "json")
        _, a = run(capsys, *argv)
        _, b = run(capsys, *argv)
        assert a.out == b.out

    def test_count_zero(self, capsys):
        code, _ = run(capsys, "sweep", "jacobi", "--count", "0")
        assert code == 2

    def test_csv_rows(self, capsys):
        code, out = run(capsys, "sweep", "jacobi", "--count", "3", "--format", "csv")
        lines = out.out.strip().splitlines()
        assert code == 0 and lines[0].startswith("identity,") and len(lines) == 5
        assert lines[-1].startswith("# summary pass_count=3")

    def test_sensitivity(self, capsys):
        code, _ = run(capsys, "sweep", "jacobi", "--count", "3", "--prefactor-shift", "1e-4")
        assert code == 1


class TestSelftest:
    def test_json_records(self, capsys):
        code, out = run(capsys, "selftest", "--json", "--scale", "0.05")
        records = [json.loads(line) for line in out.out.strip().splitlines()]
        assert code == 0
        assert [r["criterion"] for r in records] == list(range(1, 9))
        assert all(r["pass"] for r in records)

    def test_tampered_tolerance(self, capsys):
        code, out = run(capsys, "selftest", "--json", "--scale", "0.05", "--tail-tol", "1e-2")
        records = {r["criterion"]: r for r in map(json.loads, out.out.strip().splitlines())}
        assert code == 1
        failing = [r for r in records.values() if not r["pass"]]
        assert any("summation" in json.dumps(r["failures"]) for r in failing)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "multigamma", "eval", "bernoulli", "--r", "1", "--n", "1",
                           "--z", "0.5", "--omega", "1", "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == [0.0, 0.0]
