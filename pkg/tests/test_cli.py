import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from tclpulse.cli import FIG3_PANELS, fig3_trains, main, resolve_state
from tclpulse.curve import FidelityCurve
from tclpulse.errors import DomainError
from tclpulse.fock import bell_psi

PI = math.pi


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def read(path):
    return FidelityCurve.read_csv(path)


def meta(path):
    return json.loads(path.read_text())


def test_fig2_ratio10(tmp_path):
    assert run(tmp_path, "fig2", "--gamma-ratio", "10") == 0
    exact = read(tmp_path / "fig2_gamma10_exact.csv")
    tcl = read(tmp_path / "fig2_gamma10_tcl.csv")
    assert exact.method == "exact" and tcl.method == "tcl"
    assert len(exact.times) == 600 and exact.times[-1] == 3.0
    assert np.max(np.abs(exact.values - tcl.values)) <= 0.05
    m = meta(tmp_path / "fig2_gamma10.meta.json")
    assert m["config"]["reservoir"]["Gamma"] == 10.0
    assert m["outputs"] == ["fig2_gamma10_exact.csv", "fig2_gamma10_tcl.csv"]


def test_fig2_ratio1_exact_minimum(tmp_path):
    assert run(tmp_path, "fig2", "--gamma-ratio", "1", "--points", "3001") == 0
    exact = read(tmp_path / "fig2_gamma1_exact.csv")
    i = int(np.argmin(exact.values))
    assert exact.values[i] < 0.01
    assert abs(exact.times[i] - 4 * PI / (3 * math.sqrt(3))) < 2e-3


def test_fig2_oracle(tmp_path):
    assert run(tmp_path, "fig2", "--gamma-ratio", "10", "--oracle", "--points", "31",
               "--oracle-modes", "200") == 0
    oracle = read(tmp_path / "fig2_gamma10_oracle.csv")
    exact = read(tmp_path / "fig2_gamma10_exact.csv")
    assert oracle.method == "bath-oracle"
    assert np.max(np.abs(oracle.values - exact.values)) < 5e-3


def test_fig2_rejects_other_ratio(tmp_path):
    with pytest.raises(SystemExit):
        run(tmp_path, "fig2", "--gamma-ratio", "3")


def test_fig3_panel_a_and_b(tmp_path):
    assert run(tmp_path, "fig3", "--panel", "a") == 0
    base = read(tmp_path / "fig3a_nocontrol.csv")
    assert abs(base.values[-1] - 0.1287) < 1e-3
    assert run(tmp_path, "fig3", "--panel", "b") == 0
    ends = [read(tmp_path / f"fig3b_T{T:g}.csv").values[-1] for T in (0.05, 0.1, 0.5)]
    assert ends[0] >= 0.99
    assert ends[0] > ends[1] > ends[2]
    m = meta(tmp_path / "fig3b.meta.json")
    assert m["tcl_only"] is True and len(m["config"]["options"]["trains"]) == 3


@pytest.mark.parametrize("panel", sorted(FIG3_PANELS))
def test_fig3_every_panel_writes_files(tmp_path, panel):
    assert run(tmp_path, "fig3", "--panel", panel, "--points", "50", "--gnuplot") == 0
    m = meta(tmp_path / f"fig3{panel}.meta.json")
    assert len(m["outputs"]) == len(fig3_trains(panel)) + 1
    assert (tmp_path / f"fig3{panel}.gp").read_text().startswith("set datafile separator")


def test_fig3_panel_d_labels():
    labels = [label for label, _ in fig3_trains("d")]
    assert labels == ["Lambda0.5pi", "Lambda1pi", "Lambda2pi"]


def test_curve_with_exact_and_oracle(tmp_path):
    assert run(tmp_path, "curve", "--state", "bell-psi", "--points", "21", "--t-max", "1",
               "--oracle", "--oracle-modes", "200") == 0
    names = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert names == ["curve_exact.csv", "curve_oracle.csv", "curve_tcl.csv"]
    m = meta(tmp_path / "curve.meta.json")
    assert m["tcl_only"] is False and m["config"]["options"]["eta"] == pytest.approx(2.0)


def test_curve_with_pulses_is_tcl_only(tmp_path, capsys):
    assert run(tmp_path, "curve", "--period", "0.1", "--width", "0.05", "--intensity", "1pi",
               "--points", "21", "--oracle") == 0
    assert "TCL-only" in capsys.readouterr().err
    m = meta(tmp_path / "curve.meta.json")
    assert m["tcl_only"] is True
    assert m["config"]["control"]["intensity"] == PI


def test_curve_csv_round_trip_and_rerun_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["curve", "--period", "0.1", "--width", "0.05", "--intensity", "pi"]
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b)]) == 0
    first = (a / "curve_tcl.csv").read_bytes()
    assert first == (b / "curve_tcl.csv").read_bytes()
    curve = read(a / "curve_tcl.csv")
    assert curve.to_csv() == first.decode()
    assert curve.values[0] == 1.0


def test_partial_pulse_flags_rejected(tmp_path, capsys):
    assert run(tmp_path, "curve", "--period", "0.1") == 1
    assert "error:" in capsys.readouterr().err


def test_invalid_train_exit_code(tmp_path):
    assert run(tmp_path, "curve", "--period", "0.05", "--width", "0.1", "--intensity", "pi") == 1


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["eta", "--out", str(blocker / "sub")]) == 1


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"gamma": 10.0, "points": 11, "t_max": 2.0,
                               "period": 0.1, "width": 0.05, "intensity": "pi"}))
    assert run(tmp_path, "curve", "--config", str(cfg), "--points", "21") == 0
    m = meta(tmp_path / "curve.meta.json")
    assert m["config"]["grid"] == {"t_max": 2.0, "points": 21}
    assert m["config"]["reservoir"]["Gamma"] == 10.0
    assert m["config"]["control"]["intensity"] == PI


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"gama": 2}))
    assert run(tmp_path, "eta", "--config", str(cfg)) == 1


@pytest.mark.parametrize("state,value", [
    ("bell-phi", 1.0), ("bell-psi", 2.0), ("qutrit-example", 1.0), ("dark", 0.0)])
def test_eta_presets(tmp_path, capsys, state, value):
    assert run(tmp_path, "eta", "--state", state) == 0
    assert abs(float(capsys.readouterr().out.strip()) - value) < 1e-12
    assert json.loads((tmp_path / "eta.json").read_text())["state"] == state


def test_eta_inline_json(tmp_path, capsys):
    assert run(tmp_path, "eta", "--state", bell_psi().to_json()) == 0
    assert abs(float(capsys.readouterr().out) - 2.0) < 1e-12


def test_resolve_state_unknown():
    with pytest.raises(DomainError):
        resolve_state("ghz")


def test_sweep_command(tmp_path, capsys):
    assert run(tmp_path, "sweep", "--free", "T", "--values", "0.02,0.05,0.1,0.5",
               "--width", "0.05", "--intensity", "pi") == 0
    lines = (tmp_path / "sweep_T.csv").read_text().splitlines()
    assert lines[0] == "param,value,F,feasible"
    assert lines[1] == "T,0.02,nan,false"
    fs = [float(line.split(",")[2]) for line in lines[2:]]
    assert fs[0] > fs[1] > fs[2]
    assert "skipped 1" in capsys.readouterr().err
    assert meta(tmp_path / "sweep_T.meta.json")["skipped"] == [0.02]


def test_sweep_lambda_values_with_pi(tmp_path):
    assert run(tmp_path, "sweep", "--free", "Lambda", "--values", "0.5pi,pi,2pi",
               "--period", "0.1", "--width", "0.05") == 0
    lines = (tmp_path / "sweep_Lambda.csv").read_text().splitlines()
    assert [float(line.split(",")[1]) for line in lines[1:]] == pytest.approx([PI / 2, PI, 2 * PI])


def test_sweep_needs_fixed_params(tmp_path):
    assert run(tmp_path, "sweep", "--free", "T", "--lo", "0.1", "--hi", "1",
               "--width", "0.05") == 1


def test_sweep_all_infeasible_exit(tmp_path):
    assert run(tmp_path, "sweep", "--free", "T", "--lo", "0.01", "--hi", "0.04",
               "--samples", "4", "--width", "0.05", "--intensity", "pi") == 1


def test_optimize_command(tmp_path, capsys):
    assert run(tmp_path, "optimize", "--free", "T", "--lo", "0.05", "--hi", "1",
               "--width", "0.05", "--intensity", "pi") == 0
    printed = json.loads(capsys.readouterr().out)
    saved = json.loads((tmp_path / "optimize_T.json").read_text())
    assert printed == saved
    assert saved["best"] == 0.05 and saved["boundary"] is True


def test_module_entry_point(tmp_path):
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "tclpulse", "eta", "--state", "bell-psi",
                           "--out", str(tmp_path)], capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and proc.stdout.strip() == "2"
