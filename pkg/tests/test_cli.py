import json
import subprocess
import sys
from pathlib import Path

import pytest

from qhalg.cli import main

SPECS = Path(__file__).resolve().parent.parent / "specs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_analyze_a2(capsys):
    code, rep = run_json(capsys, "analyze", SPECS / "A2.qv")
    assert code == 0
    assert rep["dim"] == 3 and rep["gldim"] == 1
    assert rep["cartan"] == [[1, 1], [0, 1]]
    assert rep["euler_form_simples"] == [[1, -1], [0, 1]]
    assert rep["basis"] == ["e_1", "e_2", "a"]


def test_analyze_human_output(capsys):
    code, out, _ = run(capsys, "analyze", SPECS / "trunc3.qv")
    assert code == 0
    assert "dim: 3" in out


def test_analyze_over_finite_field(capsys):
    code, rep = run_json(capsys, "analyze", SPECS / "square.qv", "--field", "GF(5)")
    assert code == 0
    assert rep["field"] == "GF(5)" and rep["dim"] == 9


def test_check_qh_and_order(capsys):
    code, rep = run_json(capsys, "check-qh", SPECS / "A2.qv")
    assert code == 0 and rep["quasi_hereditary"] is True
    code, rep = run_json(capsys, "check-qh", SPECS / "dual2.qv")
    assert code == 1 and rep["quasi_hereditary"] is False
    code, rep = run_json(capsys, "check-qh", SPECS / "A3_ba.qv", "--order", "reverse")
    assert code == 0 and rep["vertex_order"] == ["3", "2", "1"]


def test_check_wf_refusal_exits_one(capsys):
    code, rep = run_json(capsys, "check-wf", SPECS / "A3_ba_reversed.qv")
    assert code == 1
    assert rep["quasi_hereditary"] is True
    assert rep["well_formed"] is not True
    code, rep = run_json(capsys, "check-wf", SPECS / "A3_ba.qv")
    assert code == 0


def test_auslander_command(capsys):
    code, rep = run_json(capsys, "auslander", SPECS / "trunc3.qv")
    assert code == 0 and rep["ok"] is True
    assert rep["gamma_dim"] == 14 and rep["base_dim"] == 3


def test_realize_plan(capsys):
    code, rep = run_json(capsys, "realize-plan", SPECS / "dual2.qv")
    assert code == 0
    assert rep["summary"]["rank_E"] == 2
    (step,) = rep["plan"]["steps"]
    assert step == {"k": 1, "theta_rank": 1, "psi_rank": 1, "twists": 3, "f_rank": 3, "dim_X": 3}
    code, _ = run_json(capsys, "realize-plan", SPECS / "A3_ba_reversed.qv", "--direct")
    assert code == 1


def test_glue(capsys):
    code, rep = run_json(capsys, "glue", SPECS / "k_one.qv", SPECS / "k_two.qv", SPECS / "T_kk.bim")
    assert code == 0
    assert rep["verification"]["cartan"] == [[1, 0], [1, 1]]
    assert rep["verification"]["ok"] is True
    code, rep = run_json(capsys, "glue", SPECS / "A2.qv", SPECS / "dual2.qv", SPECS / "T_A2_dual2.bim")
    assert code == 0 and rep["verification"]["ok"] is True


def test_ks(capsys):
    code, rep = run_json(capsys, "ks", "--genus", "1", "--l1", "2", "--l2", "3")
    assert code == 0
    assert rep["forms"][0]["t"] == -6
    assert rep["forms"][0]["form"] == [[-6, 1], [-1, 0]]


@pytest.mark.parametrize("argv", [
    ["analyze", SPECS / "broken.qv"],
    ["analyze", SPECS / "missing.qv"],
    ["analyze", SPECS / "A2.qv", "--field", "GF(x)"],
    ["analyze", SPECS / "A2.qv", "--order", "1,1"],
    ["glue", SPECS / "A2.qv", SPECS / "k.qv", SPECS / "T_kk.bim"],
])
def test_input_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("qhalg:")


def test_broken_spec_reports_position(capsys):
    code, _, err = run(capsys, "analyze", SPECS / "broken.qv")
    assert code == 2 and "3" in err


def test_resource_bound_exits_three(capsys, tmp_path):
    spec = tmp_path / "loop.qv"
    spec.write_text("algebra loop\nvertices 1\narrow x : 1 -> 1\n")
    code, _, err = run(capsys, "analyze", spec, "--degree-bound", "5")
    assert code == 3
    assert "bound" in err


def test_selftest_only(capsys):
    code, rep = run_json(capsys, "selftest", "--only", "7")
    assert code == 0
    assert [c["id"] for c in rep["criteria"]] == [7]


def test_selftest_human(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "3")
    assert code == 0
    assert "[PASS] 3." in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "qhalg", "analyze", str(SPECS / "k.qv"), "--format", "json"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert json.loads(r.stdout)["dim"] == 1
