import csv
import json
import math

import numpy as np
import pytest

from argminproc.chain import ArgminChainKernel, theta_kernel
from argminproc.cli import ConfigError, main, parse_model
from argminproc.stable import atom_weight


def test_parse_model_accepted_forms():
    assert parse_model("ssrw") == ("ssrw", ())
    assert parse_model("gaussian") == ("gaussian", ())
    assert parse_model("theta:0.5") == ("theta", (0.5,))
    assert parse_model("stable:1.5,1.0") == ("stable", (1.5, 1.0))


@pytest.mark.parametrize(
    "text",
    ["theta:1.5", "theta:0", "theta:abc", "ssrw:3", "stable:1.5", "stable:a,b", "levy"],
)
def test_parse_model_rejections(text):
    with pytest.raises(ConfigError):
        parse_model(text)


def test_exact_csv_contains_corner_value(tmp_path):
    base = tmp_path / "k"
    assert main(["exact", "--model", "theta:0.5", "--N", "3", "-o", str(base)]) == 0
    with open(tmp_path / "k_P.csv", newline="") as fh:
        cells = {(int(r), int(c)): float(v) for r, c, v in list(csv.reader(fh))[1:]}
    assert cells[(0, 3)] == pytest.approx(0.25, abs=1e-12)
    assert cells[(2, 1)] == pytest.approx(theta_kernel(0.5, 3).P[2, 1], abs=0)
    back = ArgminChainKernel.read_csv(tmp_path / "k_pi.csv", tmp_path / "k_P.csv")
    exact = theta_kernel(0.5, 3)
    assert np.array_equal(back.pi, exact.pi)
    assert np.array_equal(back.P, exact.P)


def test_exact_json_roundtrip(tmp_path):
    base = tmp_path / "kern"
    code = main(
        ["exact", "--model", "ssrw", "--N", "4", "--format", "json", "-o", str(base)]
    )
    assert code == 0
    payload = json.loads((tmp_path / "kern.json").read_text())
    assert payload["N"] == 4
    assert payload["pi"] == pytest.approx([0.1875, 0.125, 0.125, 0.1875, 0.375])


def test_reruns_byte_identical(tmp_path):
    args = ["exact", "--model", "stable:1.5,1.0", "--N", "5", "--format", "json"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["-o", str(a)]) == 0
    assert main(args + ["-o", str(b)]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["exact", "--model", "theta:1.5", "--N", "3"],
        ["exact", "--model", "nope", "--N", "3"],
        ["kernel", "--model", "stable:0.5,1.0", "--t", "0.3", "--x", "0.5"],
        ["kernel", "--model", "stable:2,0", "--t", "-1", "--x", "0.5"],
        ["kernel", "--model", "stable:2,0", "--t", "0.3", "--x", "1.5"],
        ["kernel", "--model", "theta:0.5", "--t", "0.3", "--x", "0.5"],
        ["ladder", "--model", "stable:2,0"],
        ["sim-levy", "--model", "stable:2,0", "--horizon", "0.5"],
    ],
)
def test_bad_configs_exit_two(argv, tmp_path, monkeypatch):
    monkeypatch.setenv("ARGMINPROC_OUTDIR", str(tmp_path))
    assert main(argv) == 2


def test_outdir_env_honored(tmp_path, monkeypatch):
    monkeypatch.setenv("ARGMINPROC_OUTDIR", str(tmp_path))
    assert main(["ladder", "--model", "ssrw", "--M", "6"]) == 0
    with open(tmp_path / "ladder_ssrw.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 7
    assert float(rows[1]["p"]) == 0.5
    assert float(rows[2]["p_tilde"]) == 0.25


def test_ladder_json_theta(tmp_path):
    base = tmp_path / "lad"
    code = main(
        ["ladder", "--model", "theta:0.5", "--M", "4", "--format", "json", "-o", str(base)]
    )
    assert code == 0
    payload = json.loads((tmp_path / "lad.json").read_text())
    assert payload["p_tilde"][:3] == pytest.approx([1.0, 0.5, 0.375])


def test_kernel_json_atom_fields(tmp_path):
    base = tmp_path / "q"
    code = main(
        [
            "kernel",
            "--model",
            "stable:2,0",
            "--t",
            "0.3",
            "--x",
            "0.6",
            "--format",
            "json",
            "--points",
            "10",
            "-o",
            str(base),
        ]
    )
    assert code == 0
    payload = json.loads((tmp_path / "q.json").read_text())
    assert payload["atom_location"] == pytest.approx(0.3, abs=1e-15)
    assert payload["atom_weight"] == pytest.approx(atom_weight(0.5, 0.3, 0.6), abs=0)
    assert payload["support"] == pytest.approx([0.7, 1.0])
    assert len(payload["y"]) == 10
    assert all(q >= 0 for q in payload["q"])


def test_kernel_csv_density_table(tmp_path):
    base = tmp_path / "tab"
    code = main(
        ["kernel", "--model", "stable:2,0", "--t", "2", "--x", "0.5", "--points", "5",
         "-o", str(base)]
    )
    assert code == 0
    with open(tmp_path / "tab.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 5
    mid = rows[2]
    assert float(mid["y"]) == pytest.approx(0.5)
    assert float(mid["q"]) == pytest.approx(2 / math.pi, rel=1e-12)


def test_sim_walk_json_verdict(tmp_path):
    base = tmp_path / "sw"
    code = main(
        ["sim-walk", "--model", "gaussian", "--N", "2", "--steps", "50000",
         "--seed", "7", "--band", "0.02", "-o", str(base)]
    )
    assert code == 0
    payload = json.loads((tmp_path / "sw.json").read_text())
    assert payload["verdict"] == "pass"
    assert payload["steps"] == 50000
    assert sum(payload["row_counts"]) == 50000


def test_sim_levy_writes_report(tmp_path):
    base = tmp_path / "sl"
    code = main(
        ["sim-levy", "--model", "stable:2,0", "--mesh", "0.01", "--horizon", "111",
         "--seed", "4", "-o", str(base)]
    )
    assert code == 0
    payload = json.loads((tmp_path / "sl.json").read_text())
    assert payload["rho"] == 0.5
    assert payload["ks"] < 0.35
    assert payload["n_samples"] == 11001


def test_verify_lemmas_exit_zero(tmp_path, capsys):
    out = tmp_path / "rep"
    assert main(["verify", "--suite", "lemmas", "--n-max", "20", "-o", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "[PASS] lemmas" in printed
    payload = json.loads((tmp_path / "rep.json").read_text())
    assert payload["max"] <= 1e-10
    assert all(r["pass"] for r in payload["residuals"])


def test_verify_all_quick(capsys):
    assert main(["verify", "--suite", "kernels", "--n-max", "12"]) == 0
    printed = capsys.readouterr().out
    assert "[PASS]" in printed
    assert "[FAIL]" not in printed
