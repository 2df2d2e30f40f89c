from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from galecert import cli
from galecert.certificate import SCHEMA, recheck

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"
THREE = str(SYSTEMS / "three_roots.json")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, doc, name="sys.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_certify_with_recheck(capsys):
    code, out, _ = run(capsys, "certify", THREE, "--method", "main", "--recheck")
    assert code == cli.EXIT_OK
    assert "status: POSITIVE_EXISTS" in out and "method: main" in out
    assert "I_C: {1, 2, 3, 4, 5}" in out
    assert "recheck: pass" in out


def test_certify_json_output_is_a_rechecked_certificate(tmp_path, capsys):
    target = tmp_path / "cert.json"
    code, _, _ = run(capsys, "certify", THREE, "--output", str(target), "--quiet")
    assert code == cli.EXIT_OK
    doc = json.loads(target.read_text())
    assert doc["schema"] == SCHEMA and doc["status"] == "POSITIVE_EXISTS"
    assert recheck(doc)


def test_parameter_sweep_prints_each_value(capsys):
    code, out, _ = run(capsys, "certify", THREE, "--method", "main", "--param", "c=1/10:5:3", "--recheck")
    assert code == cli.EXIT_OK
    assert out.count("== c=") == 3 and "== c=51/20" in out
    assert out.count("recheck: pass") == 3


def test_necessary_failure_exit_code(capsys):
    code, out, _ = run(capsys, "certify", str(SYSTEMS / "all_positive.json"))
    assert code == cli.EXIT_NECESSARY
    assert "NECESSARY_FAILS" in out and "separating functional" in out


def test_simplex_exit_code(capsys):
    code, out, _ = run(capsys, "certify", str(SYSTEMS / "binomial.json"))
    assert code == cli.EXIT_OK and "n_eq_d_plus_1" in out


def test_inconclusive_exit_code(tmp_path, capsys):
    # 1 - 3x + 2x^2 has positive roots, but no dominating dual sign pattern is realized
    doc = {"exponents": [[0], [1], [2]], "coefficients": [[1, -3, 2]]}
    code, out, _ = run(capsys, "certify", write(tmp_path, doc), "--method", "dominating")
    assert code == cli.EXIT_INCONCLUSIVE
    assert "status: INCONCLUSIVE" in out and "not a claim" in out


def test_input_errors(tmp_path, capsys):
    code, _, err = run(capsys, "certify", str(tmp_path / "missing.json"))
    assert code == cli.EXIT_INPUT and "error" in err
    bad = write(tmp_path, {"exponents": [[0], [1]], "coefficients": [[-0.5, 1]]})
    code, _, err = run(capsys, "certify", bad)
    assert code == cli.EXIT_INPUT and "numeric-only" in err
    code, _, err = run(capsys, "certify", bad, "--numeric-only")
    assert code == cli.EXIT_INPUT and "verify" in err
    code, out, _ = run(capsys, "verify", bad, "--numeric-only")
    assert code == cli.EXIT_OK and out.startswith("gale:1 direct:1 agree:yes")


@pytest.mark.parametrize("c, n, code", [("1/2", 3, cli.EXIT_OK), ("8/7", 1, cli.EXIT_OK), ("1", 1, cli.EXIT_INCONCLUSIVE)])
def test_verify_summary_line(capsys, c, n, code):
    got, out, _ = run(capsys, "verify", THREE, "--param", f"c={c}")
    assert got == code
    assert f"gale:{n} direct:{n} agree:yes" in out
    if c == "1":
        assert "DEGENERATE" in out and "degenerate: yes" in out
    else:
        assert "consistent:yes" in out


def test_verify_json_records_roots(tmp_path, capsys):
    target = tmp_path / "v.json"
    run(capsys, "verify", THREE, "--output", str(target), "--quiet")
    doc = json.loads(target.read_text())
    assert doc["gale"] == doc["direct"] == 3
    assert doc["jacobian_tally"] == {"1": 2, "-1": 1, "degenerate": 0}
    assert all(r["system_residual"] < 1e-8 for r in doc["gale_roots"])


def test_orthants_on_even_exponents(capsys):
    code, out, _ = run(capsys, "orthants", str(SYSTEMS / "even_exponents.json"), "--recheck")
    assert code == cli.EXIT_OK
    assert "multiplicity=4 status=REAL_EXISTS" in out
    assert "bound 2^rk2(A): 2" in out and "recheck: pass" in out


def test_gale_dump(capsys):
    code, out, _ = run(capsys, "gale", THREE)
    assert code == cli.EXIT_OK
    assert "I_C: {1, 2, 3, 4, 5}" in out and "faces (10)" in out
    assert out.count(" on facets ") == 5


def test_gale_dump_for_simplex(capsys):
    code, out, _ = run(capsys, "gale", str(SYSTEMS / "binomial.json"))
    assert code == cli.EXIT_OK and "no Gale variables" in out


def test_gale_json_to_stdout(capsys):
    code, out, _ = run(capsys, "gale", THREE, "--output", "-", "--quiet")
    doc = json.loads(out)
    assert doc["I_C"] == [0, 1, 2, 3, 4] and len(doc["vertices"]) == 5


def test_combined_exit_code_priority():
    assert cli._combine([0, 2, 3]) == 3
    assert cli._combine([0, 4, 3]) == 4
    assert cli._combine([1, 4]) == 1
    assert cli._combine([0, 0]) == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "galecert", "gale", str(SYSTEMS / "binomial.json")],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and "k=0" in res.stdout
