import math

import numpy as np
import pytest

from tclpulse.control import (OptimizationResult, SweepSpec, canonical_param,
                              optimize_fidelity, sweep)
from tclpulse.errors import DomainError, EmptyResultError
from tclpulse.pulse import PulseTrain
from tclpulse.tcl import ReservoirSpec, TclProblem, tcl_fidelity

PI = math.pi
PROBLEM = TclProblem(1.0, ReservoirSpec())


def spec(free, bounds, fixed, **kw):
    return SweepSpec(free, bounds, fixed, 3.0, PROBLEM, **kw)


def dense_best(s, n=512):
    xs = np.linspace(*s.bounds, n)
    fs = [s.fidelity(x) for x in xs]
    fs = [-math.inf if f is None else f for f in fs]
    return max(fs)


def test_canonical_param():
    assert canonical_param("delta") == "Delta"
    assert canonical_param("period") == "T"
    assert canonical_param("Lambda") == "Lambda"
    with pytest.raises(DomainError):
        canonical_param("phase")


def test_spec_validation():
    with pytest.raises(DomainError):
        spec("T", (0.1, 1.0), {"Delta": 0.05})
    with pytest.raises(DomainError):
        spec("T", (1.0, 0.1), {"Delta": 0.05, "Lambda": PI})
    with pytest.raises(DomainError):
        SweepSpec("T", (0.1, 1.0), {"Delta": 0.05, "Lambda": PI}, 0.0, PROBLEM)


def test_train_infeasible_is_none():
    s = spec("T", (0.01, 0.1), {"Delta": 0.05, "Lambda": PI})
    assert s.train(0.01) is None
    assert s.train(0.1) == PulseTrain(0.1, 0.05, PI)


def test_sweep_T_trend():
    rows = []
    for T in (0.05, 0.1, 0.5):
        s = spec("T", (T, T), {"Delta": min(0.05, T), "Lambda": PI})
        rows.append(sweep(s).rows[0].fidelity)
    assert rows[0] > rows[1] > rows[2]


def test_sweep_delta_weak_dependence():
    res = sweep(spec("Delta", (0.01, 0.1), {"T": 0.1, "Lambda": PI}, samples=10))
    fs = [r.fidelity for r in res.rows]
    assert max(fs) - min(fs) < 0.01
    assert min(fs) > 0.99


def test_sweep_rows_ascending_with_values():
    res = sweep(spec("Lambda", (0, 0), {"T": 0.1, "Delta": 0.05}, values=(2 * PI, PI / 2, PI)))
    assert [r.value for r in res.rows] == [PI / 2, PI, 2 * PI]
    assert res.param == "Lambda"


def test_sweep_marks_infeasible():
    res = sweep(spec("T", (0.02, 0.1), {"Delta": 0.05, "Lambda": PI}, samples=5))
    assert res.skipped == [0.02, 0.04]
    assert all(r.feasible for r in res.rows[2:])
    csv = res.to_csv().splitlines()
    assert csv[0] == "param,value,F,feasible"
    assert csv[1] == "T,0.02,nan,false"
    assert csv[3].endswith(",true")


def test_sweep_all_infeasible():
    with pytest.raises(EmptyResultError):
        sweep(spec("T", (0.01, 0.04), {"Delta": 0.05, "Lambda": PI}, samples=4))


def test_sweep_deterministic():
    s = spec("Lambda", (0.5, 6.0), {"T": 0.1, "Delta": 0.05}, samples=8)
    assert sweep(s).to_csv() == sweep(s).to_csv()


def test_sweep_matches_direct_evaluation():
    s = spec("T", (0.1, 0.1), {"Delta": 0.05, "Lambda": PI})
    direct = tcl_fidelity(TclProblem(1.0, ReservoirSpec(), PulseTrain(0.1, 0.05, PI)), 3.0)
    assert sweep(s).rows[0].fidelity == direct


def test_optimize_lambda_boundary():
    s = spec("Lambda", (0.0, 2 * PI), {"T": 0.05, "Delta": 0.05})
    r = optimize_fidelity(s)
    assert r.boundary and abs(r.best - 2 * PI) < 1e-9
    assert r.fidelity > s.fidelity(PI)
    assert r.fidelity >= dense_best(s) - 1e-6


def test_optimize_T_boundary():
    s = spec("T", (0.05, 1.0), {"Delta": 0.05, "Lambda": PI})
    r = optimize_fidelity(s)
    assert r.boundary and r.best == 0.05
    assert r.fidelity >= dense_best(s) - 1e-6


@pytest.mark.parametrize("free,bounds,fixed", [
    ("Lambda", (0.0, 2 * PI), {"T": 0.1, "Delta": 0.05}),
    ("Delta", (0.005, 0.1), {"T": 0.1, "Lambda": PI}),
])
def test_optimize_interior_beats_dense_scan(free, bounds, fixed):
    s = spec(free, bounds, fixed)
    r = optimize_fidelity(s)
    assert not r.boundary
    assert bounds[0] < r.best < bounds[1]
    assert r.fidelity >= dense_best(s) - 1e-6
    # brackets shrink to the requested relative tolerance
    a, b = r.brackets[-1]
    assert b - a <= 1e-4 * max(abs(r.best), bounds[1] - bounds[0])


def test_optimize_skips_infeasible_prescan_points():
    s = spec("T", (0.01, 0.5), {"Delta": 0.05, "Lambda": PI})
    r = optimize_fidelity(s)
    assert r.best >= 0.05 and math.isfinite(r.fidelity)


def test_optimize_degenerate_bounds():
    s = spec("T", (0.1, 0.1), {"Delta": 0.05, "Lambda": PI})
    r = optimize_fidelity(s)
    assert r == OptimizationResult(0.1, s.fidelity(0.1), 1, True)
    assert set(r.to_dict()) == {"best", "fidelity", "evaluations", "boundary"}


def test_optimize_all_infeasible():
    with pytest.raises(EmptyResultError):
        optimize_fidelity(spec("T", (0.01, 0.04), {"Delta": 0.05, "Lambda": PI}))
    with pytest.raises(EmptyResultError):
        optimize_fidelity(spec("T", (0.02, 0.02), {"Delta": 0.05, "Lambda": PI}))


def test_optimize_deterministic():
    s = spec("Delta", (0.005, 0.1), {"T": 0.1, "Lambda": PI})
    assert optimize_fidelity(s) == optimize_fidelity(s)
