"""One-parameter sweeps and maximization of the TCL fidelity over pulse settings."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, EmptyResultError, NumericalError
from .pulse import PulseTrain
from .tcl import TclProblem, tcl_fidelity

PARAMS = ("T", "Delta", "Lambda")
_ALIASES = {"t": "T", "period": "T", "delta": "Delta", "width": "Delta",
            "lambda": "Lambda", "intensity": "Lambda"}
_FIELD = {"T": "period", "Delta": "width", "Lambda": "intensity"}
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def canonical_param(name: str) -> str:
    if name in PARAMS:
        return name
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise DomainError(f"unknown pulse parameter {name!r}; expected one of {PARAMS}") from None


@dataclass(frozen=True)
class SweepSpec:
    """Vary one of (T, Delta, Lambda) with the other two held fixed.

    ``values`` overrides the uniform ``samples``-point grid on ``bounds``.
    """

    free: str
    bounds: tuple[float, float]
    fixed: dict
    t: float
    problem: TclProblem
    samples: int = 64
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "free", canonical_param(self.free))
        fixed = {canonical_param(k): float(v) for k, v in self.fixed.items()}
        missing = set(PARAMS) - {self.free} - set(fixed)
        if missing:
            raise DomainError(f"fixed values missing for {sorted(missing)}")
        fixed.pop(self.free, None)
        object.__setattr__(self, "fixed", fixed)
        lo, hi = map(float, self.bounds)
        if hi < lo:
            raise DomainError(f"bounds must satisfy lo <= hi, got ({lo}, {hi})")
        object.__setattr__(self, "bounds", (lo, hi))
        if not self.t > 0:
            raise DomainError(f"evaluation time must be positive, got {self.t}")
        if self.values is None and self.samples < 1:
            raise DomainError("samples must be >= 1")

    def grid(self) -> list[float]:
        if self.values is not None:
            return sorted(float(v) for v in self.values)
        lo, hi = self.bounds
        if lo == hi or self.samples == 1:
            return [lo]
        return [float(x) for x in np.linspace(lo, hi, self.samples)]

    def train(self, value: float) -> PulseTrain | None:
        """Pulse train for one value of the free parameter; None when infeasible."""
        kw = {_FIELD[k]: v for k, v in self.fixed.items()}
        kw[_FIELD[self.free]] = value
        try:
            return PulseTrain(epsilon=self.problem.control.epsilon, **kw)
        except DomainError:
            return None

    def fidelity(self, value: float) -> float | None:
        train = self.train(value)
        if train is None:
            return None
        f = tcl_fidelity(replace(self.problem, control=train), self.t)
        if not math.isfinite(f):
            raise NumericalError(f"non-finite fidelity {f} for {self.free}={value}, {self.fixed}")
        return f

    def to_dict(self) -> dict:
        return {"free": self.free, "bounds": list(self.bounds), "fixed": dict(self.fixed),
                "t": self.t, "samples": self.samples,
                "values": None if self.values is None else list(self.values),
                "problem": self.problem.to_dict()}


@dataclass(frozen=True)
class SweepRow:
    value: float
    fidelity: float
    feasible: bool


@dataclass(frozen=True)
class SweepResult:
    param: str
    rows: tuple[SweepRow, ...]

    @property
    def feasible(self) -> list[SweepRow]:
        return [r for r in self.rows if r.feasible]

    @property
    def skipped(self) -> list[float]:
        return [r.value for r in self.rows if not r.feasible]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("param,value,F,feasible\n")
        for r in self.rows:
            f = f"{r.fidelity:.12g}" if r.feasible else "nan"
            buf.write(f"{self.param},{r.value:.12g},{f},{str(r.feasible).lower()}\n")
        return buf.getvalue()


def sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate F(t) for every sampled value of the free parameter, ascending."""
    rows = []
    for x in spec.grid():
        f = spec.fidelity(x)
        rows.append(SweepRow(x, math.nan if f is None else f, f is not None))
    if not any(r.feasible for r in rows):
        raise EmptyResultError(f"every sampled {spec.free} violates width <= period")
    return SweepResult(spec.free, tuple(rows))


@dataclass(frozen=True)
class OptimizationResult:
    best: float
    fidelity: float
    evaluations: int
    boundary: bool
    brackets: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"best": self.best, "fidelity": self.fidelity,
                "evaluations": self.evaluations, "boundary": self.boundary}


def optimize_fidelity(spec: SweepSpec, prescan: int = 64, rtol: float = 1e-4) -> OptimizationResult:
    """Maximize F(t) over the free parameter: uniform pre-scan, then golden section.

    The refinement is local to the neighbourhood of the best pre-scan sample.
    An optimum sitting on a bound is reported with ``boundary=True`` (no
    interior stationary point was found there).
    """
    lo, hi = spec.bounds
    seen: dict[float, float] = {}

    def objective(x):
        if x not in seen:
            f = spec.fidelity(x)
            seen[x] = -math.inf if f is None else f
        return seen[x]

    if lo == hi:
        f = objective(lo)
        if f == -math.inf:
            raise EmptyResultError(f"{spec.free}={lo} is infeasible")
        return OptimizationResult(lo, f, 1, True)

    xs = [float(x) for x in np.linspace(lo, hi, prescan)]
    fs = [objective(x) for x in xs]
    i = int(np.argmax(fs))
    if fs[i] == -math.inf:
        raise EmptyResultError(f"every pre-scan value of {spec.free} is infeasible")
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    brackets = [(a, b)]
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = objective(c), objective(d)
    scale = max(abs(xs[i]), hi - lo)
    while b - a > rtol * scale:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = objective(d)
        brackets.append((a, b))
    best = max(seen, key=lambda x: (seen[x], -abs(x - xs[i])))
    edge_tol = rtol * scale
    boundary = (i in (0, len(xs) - 1)) and min(abs(best - lo), abs(best - hi)) <= edge_tol
    return OptimizationResult(best, seen[best], len(seen), boundary, brackets)
