import json
from pathlib import Path

import pytest

from curvedmf import cli

INPUTS = Path(__file__).resolve().parent.parent / "inputs"


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None), out


def test_hh_on_the_two_sphere(capsys):
    code, rep, _ = run(["hh", INPUTS / "s2.json", "--w", "u"], capsys)
    assert code == 0
    assert rep["result"]["dimension"] == 2 and rep["result"]["even_only"] is True


def test_critical_length(capsys):
    code, rep, _ = run(["critical-length", INPUTS / "quadric_mirror.json", "--d", "2"], capsys)
    assert code == 0
    assert rep["result"]["length"] == 6 and rep["result"]["local_multiplicity"] == 3


def test_critical_length_specialized_records_seed(capsys):
    code, rep, _ = run(["critical-length", INPUTS / "quadric_mirror.json", "--d", "2",
                        "--t-mode", "specialize", "--seed", "5"], capsys)
    assert code == 0
    assert rep["result"]["length"] == 6 and rep["result"]["probabilistic"] is True
    assert rep["inputs"]["options"]["seed"] == 5


def test_gauge(capsys):
    code, rep, _ = run(["gauge", INPUTS / "gauge_lemma.json"], capsys)
    assert code == 0
    assert rep["result"]["result"] == "-u*t + 1/4*u^3*t^2"


def test_non_isolated_exits_two(capsys):
    code, rep, _ = run(["isolated", INPUTS / "s2xs2.json"], capsys)
    assert code == 2
    assert rep["result"]["isolated"] is False


def test_mf_hom_products(capsys):
    code, rep, _ = run(["mf-hom", INPUTS / "mf_q_brane.json"], capsys)
    assert code == 0
    assert rep["result"]["products"]["o0*o0"] == {"coefficients": ["u"], "parity": "even"}
    code, rep, _ = run(["mf-hom", INPUTS / "mf_u_brane.json"], capsys)
    assert rep["result"]["dimension"] == 2


@pytest.mark.parametrize("argv,key,value", [
    (["grassmannian", "--n", "2"], "zero_eigenspace_dimension", 3),
    (["quiver-hh", "--n", "2"], "obstruction_total", 0),
])
def test_option_only_commands(tmp_path, capsys, argv, key, value):
    code, rep, _ = run(argv, capsys)
    assert code == 0 and rep["result"][key] == value


def test_preset_commands(tmp_path, capsys):
    path = tmp_path / "q.json"
    path.write_text(json.dumps({"preset": "quadric_n", "n": 3}))
    code, rep, _ = run(["mirror-ring", path], capsys)
    assert code == 0 and rep["result"]["verified"] is True
    path.write_text(json.dumps({"preset": "cpn_fiber", "n": 2, "d": 2}))
    code, rep, _ = run(["ainf-check", path], capsys)
    assert code == 0 and rep["result"]["passed"] is True
    path.write_text(json.dumps({"preset": "cpn_fiber", "n": 2, "d": 2, "variant": "literal"}))
    code, rep, _ = run(["ainf-check", path], capsys)
    assert code == 2 and rep["result"]["violations"]
    path.write_text(json.dumps({"preset": "projective_space", "n": 3}))
    code, rep, _ = run(["gamma-check", path], capsys)
    assert code == 0 and rep["result"]["traces_vanish"] is True


def test_replay_is_byte_stable(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["critical-length", str(INPUTS / "quadric_mirror.json"), "--d", "3", "--out", str(out)]) == 0
    first = out.read_text()
    again = tmp_path / "again.json"
    assert cli.main(["critical-length", str(out), "--out", str(again)]) == 0
    assert again.read_text() == first
    assert json.loads(first)["result"]["length"] == 8


@pytest.mark.parametrize("payload", [
    {"preset": "sphere_product"},
    {"preset": "no_such_model"},
    {"x": [{"name": "x", "degree": -2}], "beta": [{"name": "b", "degree": -3}], "f": {"b": "x"}, "w": "u"},
])
def test_input_errors_exit_one(tmp_path, capsys, payload):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    code, rep, _ = run(["hh", path, "--w", "u"], capsys)
    assert code == 1 and "error" in rep


def test_unreadable_input(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert cli.main(["hh", str(path)]) == 1
    assert cli.main(["hh", str(tmp_path / "missing.json")]) == 1


def test_budget_exit_code(monkeypatch, capsys):
    def exhausted(data, opts):
        raise cli.BudgetError("out of budget")
    monkeypatch.setitem(cli.COMMANDS, "gauge", exhausted)
    code, rep, _ = run(["gauge", INPUTS / "gauge_lemma.json"], capsys)
    assert code == 3 and rep["error"] == "out of budget"
