from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qtb import bethe
from qtb.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, RunConfig, build_parser, config_from_args, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_verify_gordon_small(capsys):
    code, rep, err = run(capsys, "verify", "gordon", "--n", "3")
    assert code == EXIT_OK
    assert rep["dims"] == {"0": 1, "1": 1, "2": 2, "3": 3}
    assert rep["pass"] is True
    assert "n=3" in err


def test_verify_kn(capsys):
    code, rep, _ = run(capsys, "verify", "kn", "--degree", "2")
    assert code == EXIT_OK and rep["pass"]


def test_verify_fock(capsys):
    code, rep, _ = run(capsys, "verify", "fock")
    assert code == EXIT_OK
    assert all(r["pass"] for r in rep["records"])


def test_degenerate_q1_is_a_config_error(capsys):
    code, rep, err = run(capsys, "verify", "relations", "--q1", "1/4")
    assert code == EXIT_CONFIG and rep is None
    assert "non-generic" in err


def test_spectrum_vacuum(capsys):
    from qtb.params import default_float

    code, rep, _ = run(capsys, "spectrum", "--n", "0")
    assert code == EXIT_OK
    g = complex(default_float().gamma(1, (1,)))
    assert abs(complex(*rep["eigenvalues"][0]) - g) < 1e-12


def test_spectrum_at_zero_twist(capsys):
    from qtb.params import default_float

    P = default_float()
    code, rep, _ = run(capsys, "spectrum", "--n", "2", "--p", "0")
    g = complex(P.gamma(1, (1,)))
    expected = sorted([g - 1 - complex(P.q1), g - 1 - complex(P.q3)], key=lambda z: (z.real, z.imag))
    got = [complex(*z) for z in rep["eigenvalues"]]
    assert all(abs(a - b) < 1e-12 for a, b in zip(got, expected))


def test_spectrum_divergence(capsys):
    code, _, err = run(capsys, "spectrum", "--n", "1", "--p", "3/2")
    assert code == EXIT_CONFIG and "divergent" in err


def test_bethe_matches_spectrum(capsys):
    code, rep, err = run(capsys, "bethe", "--n", "2")
    assert code == EXIT_OK
    assert len(rep["states"]) == 2
    assert all(r["match"] and r["delta"] < 1e-8 for r in rep["comparison"])
    assert all(s["kernel_max"] < 1e-8 for s in rep["states"])
    assert "match" in err


def test_bethe_two_points(capsys):
    code, rep, _ = run(capsys, "bethe", "--n", "1", "--k", "2")
    assert code == EXIT_OK
    assert rep["k"] == 2 and len(rep["states"]) == 2
    assert all(s["kernel_max"] < 1e-8 for s in rep["states"])
    assert "comparison" not in rep


def test_bethe_failed_path_exits_2(capsys, monkeypatch):
    def broken(system, seed, steps=40, **kw):
        raise bethe.ContinuationError("forced", [])

    monkeypatch.setattr(bethe, "solve_from_seed", broken)
    code, rep, _ = run(capsys, "bethe", "--n", "1")
    assert code == EXIT_FAIL
    assert rep["states"][0]["converged"] is False


def test_offshell(capsys):
    code, rep, _ = run(capsys, "offshell", "--n", "2")
    assert code == EXIT_OK
    for s in rep["states"]:
        assert s["residual"] < 1e-8 and s["perturbed_residual"] > 1e-3
        assert set(s["covector"]) == {"(2)", "(1,1)"}


def test_number_formats(capsys):
    code, rep, _ = run(capsys, "spectrum", "--n", "1", "--q", "1.3,0.1", "--q1", "5/2", "--u", "2", "--p", "1/10")
    assert code == EXIT_OK
    assert rep["u"] == [2.0, 0.0]


def test_exact_parameters_from_rationals():
    args = build_parser().parse_args(["verify", "kn", "--q", "3/2", "--q1", "5"])
    P = config_from_args(args).params()
    assert P.exact and str(P.q) == "3/2"


def test_bad_window(capsys):
    code, _, _ = run(capsys, "gordon", "--n", "1", "--window", "x")
    assert code == EXIT_CONFIG


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, rep, _ = run(capsys, "spectrum", "--n", "1", "--out", str(path))
    assert code == EXIT_OK
    assert json.loads(path.read_text()) == rep


def test_config_round_trip():
    args = build_parser().parse_args(["bethe", "--n", "2", "--u", "1", "--u", "0.5,0.2", "--seed", "4"])
    cfg = config_from_args(args)
    assert RunConfig.from_json(json.dumps(cfg.to_json())) == cfg


def test_precision_env(monkeypatch):
    monkeypatch.setenv("QTB_PRECISION", "33")
    cfg = config_from_args(build_parser().parse_args(["spectrum"]))
    assert cfg.precision == 33
    cfg = config_from_args(build_parser().parse_args(["spectrum", "--precision", "50"]))
    assert cfg.precision == 50


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qtb", "verify", "gordon", "--n", "2"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert json.loads(res.stdout)["dims"] == {"0": 1, "1": 1, "2": 2}
