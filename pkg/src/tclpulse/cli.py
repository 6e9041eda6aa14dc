"""Command-line entry point: ``tclpulse {fig2,fig3,curve,sweep,optimize,eta}``.

Settings come from built-in defaults, then an optional ``--config`` JSON
file, then explicit flags (highest precedence).  Every run writes its data
files plus a ``<stem>.meta.json`` sidecar holding the resolved configuration.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, _core
from .control import PARAMS, SweepSpec, canonical_param, optimize_fidelity, sweep
from .curve import FidelityCurve, uniform_grid
from .errors import DomainError, TclPulseError
from .exact import (BathDiscretization, SingleExcitationState, bath_oracle_evolve,
                    exact_fidelity_curve)
from .fock import PRESETS, FockBasis, StateVector, eta
from .pulse import NoControl, PulseTrain, parse_intensity
from .tcl import ReservoirSpec, TclProblem, tcl_fidelity_curve

DEFAULTS = {
    "gamma0": 1.0,
    "gamma": 1.0,
    "period": None,
    "width": None,
    "intensity": None,
    "no_control": False,
    "state": "bell-phi",
    "t_max": 3.0,
    "points": 600,
    "out": ".",
    "oracle": False,
    "oracle_modes": 400,
    "oracle_window": 20.0,
    "oracle_dt": 1e-3,
    "gnuplot": False,
    # command specific
    "gamma_ratio": None,
    "panel": None,
    "free": None,
    "lo": None,
    "hi": None,
    "samples": 64,
    "values": None,
    "at": None,
    "prescan": 64,
}

PI = math.pi
FIG3_PANELS = {
    "a": ("none", [None]),
    "b": ("T", [0.05, 0.1, 0.5]),
    "c": ("Delta", [0.01, 0.05, 0.1]),
    "d": ("Lambda", [PI / 2, PI, 2 * PI]),
}
FIG3_BASE = {"T": 0.1, "Delta": 0.05, "Lambda": PI}


@dataclass
class RunConfig:
    command: str
    state: str
    reservoir: dict
    control: dict
    grid: dict
    out: str
    oracle: dict
    options: dict = field(default_factory=dict)


def resolve_state(text: str) -> StateVector:
    """Preset name, inline StateVector JSON, or path to a JSON file."""
    text = str(text).strip()
    if text in PRESETS:
        return PRESETS[text]()
    if text.startswith("{"):
        return StateVector.from_json(text)
    path = Path(text)
    if path.is_file():
        return StateVector.from_json(path.read_text())
    raise DomainError(f"unknown state {text!r}; presets are {sorted(PRESETS)}")


def single_excitation(state: StateVector) -> SingleExcitationState | None:
    """The (alpha, beta) pair if the state lives in span{|10>, |01>}."""
    basis = state.basis
    i10, i01 = basis.index((1, 0)), basis.index((0, 1))
    rest = np.delete(state.amplitudes, [i10, i01])
    if np.any(np.abs(rest) > 1e-14):
        return None
    return SingleExcitationState(complex(state.amplitudes[i10]), complex(state.amplitudes[i01]))


def _control_from(opts, allow_missing=()) -> PulseTrain | NoControl:
    names = {"T": "period", "Delta": "width", "Lambda": "intensity"}
    given = {k: opts[v] for k, v in names.items() if opts[v] is not None}
    if opts["no_control"] or not given:
        return NoControl()
    missing = [k for k in names if k not in given and k not in allow_missing]
    if missing:
        raise DomainError(f"pulse control needs --period, --width and --intensity (missing {missing})")
    return PulseTrain(given["T"], given["Delta"], given["Lambda"])


def _reservoir(opts) -> ReservoirSpec:
    return ReservoirSpec(gamma0=float(opts["gamma0"]), Gamma=float(opts["gamma"]))


def _grid(opts) -> np.ndarray:
    return uniform_grid(float(opts["t_max"]), int(opts["points"]))


def _oracle_disc(opts, res):
    return BathDiscretization(res, int(opts["oracle_modes"]),
                              float(opts["oracle_window"]) * res.Gamma)


class Outputs:
    """Collects the files written by one run, then emits the sidecar."""

    def __init__(self, out_dir, stem):
        self.dir = Path(out_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.stem = stem
        self.files: list[str] = []
        self.curves: list[tuple[str, str]] = []

    def curve(self, name: str, curve: FidelityCurve, title: str | None = None):
        path = curve.write_csv(self.dir / f"{name}.csv")
        self.files.append(path.name)
        self.curves.append((path.name, title or name))

    def text(self, name: str, body: str):
        path = self.dir / name
        with open(path, "w", newline="\n") as fh:
            fh.write(body)
        self.files.append(path.name)

    def finish(self, config: RunConfig, started: float, gnuplot: bool, extra=None):
        if gnuplot and self.curves:
            lines = ["set datafile separator ','", "set key autotitle columnhead",
                     "set xlabel 'gamma0 t'", "set ylabel 'F'", "set yrange [0:1.05]",
                     "plot " + ", \\\n     ".join(
                         f"'{f}' using 1:2 with lines title '{t}'" for f, t in self.curves)]
            self.text(f"{self.stem}.gp", "\n".join(lines) + "\n")
        meta = {"tool": "tclpulse", "version": __version__, "backend": _core.BACKEND,
                "config": asdict(config), "outputs": list(self.files),
                "wall_time_s": round(time.perf_counter() - started, 6)}
        if extra:
            meta.update(extra)
        with open(self.dir / f"{self.stem}.meta.json", "w", newline="\n") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _config(opts, command, control, options) -> RunConfig:
    return RunConfig(
        command=command, state=str(opts["state"]),
        reservoir=_reservoir(opts).to_dict(), control=control.to_dict(),
        grid={"t_max": float(opts["t_max"]), "points": int(opts["points"])},
        out=str(opts["out"]),
        oracle={"enabled": bool(opts["oracle"]), "modes": int(opts["oracle_modes"]),
                "window": float(opts["oracle_window"]), "dt": float(opts["oracle_dt"])},
        options=options)


def run_fig2(opts, started):
    ratio = opts["gamma_ratio"]
    if ratio is None:
        raise DomainError("fig2 needs --gamma-ratio")
    ratio = float(ratio)
    g0 = float(opts["gamma0"])
    res = ReservoirSpec(gamma0=g0, Gamma=ratio * g0)
    grid = _grid(opts)
    state = SingleExcitationState.symmetric()
    tag = f"{ratio:g}"
    out = Outputs(opts["out"], f"fig2_gamma{tag}")
    out.curve(f"fig2_gamma{tag}_exact", exact_fidelity_curve(state, res, grid), "exact")
    out.curve(f"fig2_gamma{tag}_tcl",
              tcl_fidelity_curve(TclProblem(2.0, res, NoControl()), grid), "TCL")
    if opts["oracle"]:
        curve = bath_oracle_evolve(state, _oracle_disc(opts, res), grid, float(opts["oracle_dt"]))
        out.curve(f"fig2_gamma{tag}_oracle", curve, "bath oracle")
    cfg = _config({**opts, "gamma": res.Gamma, "state": "bell-psi"}, "fig2", NoControl(),
                  {"gamma_ratio": ratio})
    out.finish(cfg, started, opts["gnuplot"])
    return 0


def fig3_trains(panel: str):
    """(label, control) pairs for one fig3 panel."""
    free, values = FIG3_PANELS[panel]
    if free == "none":
        return [("nocontrol", NoControl())]
    items = []
    for v in values:
        p = dict(FIG3_BASE, **{free: v})
        if panel == "b":
            p["Delta"] = min(FIG3_BASE["Delta"], v)
        label = f"{free}{v / PI:g}pi" if free == "Lambda" else f"{free}{v:g}"
        items.append((label, PulseTrain(p["T"], p["Delta"], p["Lambda"])))
    return items


def run_fig3(opts, started):
    panel = opts["panel"]
    if panel not in FIG3_PANELS:
        raise DomainError(f"--panel must be one of {sorted(FIG3_PANELS)}")
    res = _reservoir(opts)
    grid = _grid(opts)
    out = Outputs(opts["out"], f"fig3{panel}")
    for label, ctrl in fig3_trains(panel):
        curve = tcl_fidelity_curve(TclProblem(1.0, res, ctrl), grid)
        out.curve(f"fig3{panel}_{label}", curve, label)
    cfg = _config(opts, "fig3", NoControl(), {"panel": panel, "eta": 1.0,
                                              "trains": [c.to_dict() for _, c in fig3_trains(panel)]})
    out.finish(cfg, started, opts["gnuplot"], {"tcl_only": True})
    return 0


def run_curve(opts, started):
    state = resolve_state(opts["state"])
    eta_value = eta(state)
    res = _reservoir(opts)
    ctrl = _control_from(opts)
    grid = _grid(opts)
    out = Outputs(opts["out"], "curve")
    out.curve("curve_tcl", tcl_fidelity_curve(TclProblem(eta_value, res, ctrl), grid), "TCL")
    single = single_excitation(state)
    checked = False
    if isinstance(ctrl, NoControl) and single is not None:
        out.curve("curve_exact", exact_fidelity_curve(single, res, grid), "exact")
        checked = True
        if opts["oracle"]:
            curve = bath_oracle_evolve(single, _oracle_disc(opts, res), grid, float(opts["oracle_dt"]))
            out.curve("curve_oracle", curve, "bath oracle")
    elif opts["oracle"]:
        print("note: no exact benchmark for this state/control; curve is TCL-only",
              file=sys.stderr)
    cfg = _config(opts, "curve", ctrl, {"eta": eta_value})
    out.finish(cfg, started, opts["gnuplot"], {"tcl_only": not checked})
    return 0


def _sweep_spec(opts) -> SweepSpec:
    if opts["free"] is None:
        raise DomainError("--free is required")
    free = canonical_param(opts["free"])
    names = {"T": "period", "Delta": "width", "Lambda": "intensity"}
    fixed = {}
    for p in PARAMS:
        if p != free:
            if opts[names[p]] is None:
                raise DomainError(f"--{names[p]} must be fixed when sweeping {free}")
            fixed[p] = opts[names[p]]
    values = opts["values"]
    if values is not None:
        values = tuple(parse_intensity(v) if free == "Lambda" else float(v)
                       for v in (values.split(",") if isinstance(values, str) else values))
        lo, hi = min(values), max(values)
    else:
        if opts["lo"] is None or opts["hi"] is None:
            raise DomainError("give --lo and --hi, or --values")
        conv = parse_intensity if free == "Lambda" else float
        lo, hi = conv(opts["lo"]), conv(opts["hi"])
    state = resolve_state(opts["state"])
    t_eval = float(opts["at"] if opts["at"] is not None else opts["t_max"])
    problem = TclProblem(eta(state), _reservoir(opts), NoControl())
    return SweepSpec(free, (lo, hi), fixed, t_eval, problem,
                     samples=int(opts["samples"]), values=values)


def run_sweep(opts, started):
    spec = _sweep_spec(opts)
    result = sweep(spec)
    out = Outputs(opts["out"], f"sweep_{spec.free}")
    out.text(f"sweep_{spec.free}.csv", result.to_csv())
    if result.skipped:
        print(f"skipped {len(result.skipped)} infeasible {spec.free} values (width > period)",
              file=sys.stderr)
    out.finish(_config(opts, "sweep", NoControl(), spec.to_dict()), started, False,
               {"skipped": result.skipped})
    return 0


def run_optimize(opts, started):
    spec = _sweep_spec(opts)
    result = optimize_fidelity(spec, prescan=int(opts["prescan"]))
    out = Outputs(opts["out"], f"optimize_{spec.free}")
    out.text(f"optimize_{spec.free}.json", json.dumps(result.to_dict(), indent=2) + "\n")
    print(json.dumps(result.to_dict()))
    out.finish(_config(opts, "optimize", NoControl(), spec.to_dict()), started, False)
    return 0


def run_eta(opts, started):
    state = resolve_state(opts["state"])
    value = eta(state)
    print(f"{value:.12g}")
    out = Outputs(opts["out"], "eta")
    out.text("eta.json", json.dumps({"state": str(opts["state"]), "eta": value,
                                     "per_mode_dim": state.basis.per_mode_dim}) + "\n")
    out.finish(_config(opts, "eta", NoControl(), {"eta": value}), started, False)
    return 0


COMMANDS = {"fig2": run_fig2, "fig3": run_fig3, "curve": run_curve,
            "sweep": run_sweep, "optimize": run_optimize, "eta": run_eta}


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False, argument_default=S)
    g = common.add_argument_group("shared options")
    g.add_argument("--config", help="JSON file of settings; flags take precedence")
    g.add_argument("--gamma0", type=float, help="Markovian decay rate (default 1)")
    g.add_argument("--gamma", type=float, help="Lorentzian width Gamma in units of gamma0 (default 1)")
    g.add_argument("--period", type=float, help="pulse period T")
    g.add_argument("--width", type=float, help="pulse width Delta")
    g.add_argument("--intensity", type=parse_intensity,
                   help="pulse area Lambda; accepts a 'pi' suffix, e.g. 1pi")
    g.add_argument("--no-control", action="store_true", help="disable pulses")
    g.add_argument("--state", help=f"preset ({', '.join(PRESETS)}), StateVector JSON or JSON file")
    g.add_argument("--t-max", type=float, help="end of the time grid (default 3)")
    g.add_argument("--points", type=int, help="grid points (default 600)")
    g.add_argument("--out", help="output directory (default .)")
    g.add_argument("--oracle", action="store_true", help="also run the discretized-bath oracle")
    g.add_argument("--oracle-modes", type=int, help="bath modes L (default 400)")
    g.add_argument("--oracle-window", type=float,
                   help="bath half-width in units of Gamma (default 20)")
    g.add_argument("--oracle-dt", type=float, help="RK4 step (default 1e-3)")
    g.add_argument("--gnuplot", action="store_true", help="emit a gnuplot script for the curves")

    parser = argparse.ArgumentParser(
        prog="tclpulse",
        description="TCL fidelity of two oscillators in a common Lorentzian reservoir "
                    "under rectangular pulse control.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig2", parents=[common], help="exact vs TCL decay without control")
    p.add_argument("--gamma-ratio", choices=["1", "10"], default=S)
    p = sub.add_parser("fig3", parents=[common], help="TCL curves under pulse families")
    p.add_argument("--panel", choices=sorted(FIG3_PANELS), default=S)
    sub.add_parser("curve", parents=[common], help="TCL curve for one state and control")
    for name, text in (("sweep", "scan one pulse parameter"),
                       ("optimize", "maximize F(t) over one pulse parameter")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--free", choices=list(PARAMS), default=S)
        p.add_argument("--lo", default=S)
        p.add_argument("--hi", default=S)
        p.add_argument("--samples", type=int, default=S)
        p.add_argument("--values", default=S, help="comma-separated explicit values")
        p.add_argument("--at", type=float, default=S, help="evaluation time (default --t-max)")
        if name == "optimize":
            p.add_argument("--prescan", type=int, default=S)
    sub.add_parser("eta", parents=[common], help="leakage coefficient of a state")
    return parser


def resolve_options(args: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    given = vars(args)
    if "config" in given:
        with open(given["config"]) as fh:
            data = json.load(fh)
        unknown = set(data) - set(DEFAULTS) - {"command"}
        if unknown:
            raise DomainError(f"unknown config keys {sorted(unknown)}")
        data.pop("command", None)
        opts.update(data)
    opts.update({k: v for k, v in given.items() if k != "config"})
    if isinstance(opts["intensity"], str):
        opts["intensity"] = parse_intensity(opts["intensity"])
    return opts


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        opts = resolve_options(args)
        return COMMANDS[args.command](opts, started)
    except TclPulseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
