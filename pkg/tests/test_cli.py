import json

import pytest

from causalqed.cli import main
from causalqed.wick import WickPolynomial


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def test_split_toy_negative_order(tmp_path):
    assert run(tmp_path, "split", "--toy", "sgn-exp") == 0
    report = json.loads((tmp_path / "split_report.json").read_text())
    assert report["omega"] == -1
    assert report["ambiguity_dimension"] == 0
    assert report["reconstruction_residual"] <= 1e-10
    header = (tmp_path / "split.csv").read_text().splitlines()[0]
    assert header == "E,d_re,d_im,ret_re,ret_im,adv_re,adv_im"


def test_split_missing_constants_is_validation_error(tmp_path):
    assert run(tmp_path, "split", "--toy", "sgn-exp-d3") == 2


def test_split_with_constants(tmp_path):
    assert run(tmp_path, "split", "--toy", "sgn-exp-d3",
               "--c0", "0", "--c1", "0", "--c2", "0") == 0
    report = json.loads((tmp_path / "split_report.json").read_text())
    assert report["ambiguity_dimension"] == 3


def test_split_ignores_constants_below_order_zero(tmp_path, capsys):
    assert run(tmp_path, "split", "--toy", "sgn-exp", "--c0", "5") == 0
    assert "ignored" in capsys.readouterr().err


def test_split_unknown_toy_and_empty_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"toy": "no-such-toy"}))
    assert main(["split", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert main(["split", "--out", str(tmp_path)]) == 2  # neither toy nor descriptor


def test_split_descriptor_with_wrong_support(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"descriptor": {"kind": "Dret", "mass": 1.0}}))
    assert main(["split", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_vacuum_pol_run_and_massless_rejection(tmp_path):
    assert run(tmp_path, "vacuum-pol", "--m", "1.0") == 0
    report = json.loads((tmp_path / "vacuum_pol_report.json").read_text())
    assert report["all_pass"]
    rows = (tmp_path / "vacuum_pol.csv").read_text().splitlines()
    assert rows[0] == "p2,re,im"
    assert len(rows) > 10
    assert run(tmp_path, "vacuum-pol", "--m", "0") == 2


def test_self_energy_run(tmp_path):
    assert run(tmp_path, "self-energy", "--m", "1.0") == 0
    report = json.loads((tmp_path / "self_energy_report.json").read_text())
    assert report["all_pass"]
    assert run(tmp_path, "self-energy", "--m", "0") == 2


def test_sweep_on_shell_and_off_shell(tmp_path):
    assert run(tmp_path, "adiabatic-sweep", "--channel", "Sigma_into_psi",
               "--eps-steps", "8") == 0
    verdict = json.loads((tmp_path / "sweep_verdict.json").read_text())
    assert verdict["verdict"] == "converged"
    assert run(tmp_path, "adiabatic-sweep", "--channel", "Sigma_into_psi",
               "--normalization", "custom", "--c0", "0.5", "--c1", "0.0",
               "--eps-steps", "8") == 0
    verdict = json.loads((tmp_path / "sweep_verdict.json").read_text())
    assert verdict["verdict"] == "diverged"


def test_sweep_schedule_validation(tmp_path):
    assert run(tmp_path, "adiabatic-sweep", "--eps-start", "1e-6",
               "--eps-stop", "1e-3") == 2


def test_fock_check(tmp_path):
    assert run(tmp_path, "fock-check", "--grid-modes", "4", "--cutoff", "3") == 0
    report = json.loads((tmp_path / "fock_check.json").read_text())
    assert report["max_deviation"]["bose"] <= 1e-12
    assert report["max_deviation"]["fermi"] <= 1e-12
    assert run(tmp_path, "fock-check", "--grid-modes", "50") == 2


def test_wick_expand_and_cap(tmp_path):
    assert run(tmp_path, "wick-expand", "--order", "2") == 0
    poly = WickPolynomial.from_json((tmp_path / "wick_order2.json").read_text())
    assert len(poly) > 0
    assert run(tmp_path, "wick-expand", "--order", "6") == 2
    assert run(tmp_path, "wick-expand", "--order", "0") == 2


def test_outputs_are_deterministic(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        assert main(["split", "--toy", "sgn-exp", "--out", str(d)]) == 0
    assert (d1 / "split.csv").read_bytes() == (d2 / "split.csv").read_bytes()
    assert ((d1 / "split_report.json").read_bytes()
            == (d2 / "split_report.json").read_bytes())


def test_no_subcommand_prints_help():
    assert main([]) == 2
