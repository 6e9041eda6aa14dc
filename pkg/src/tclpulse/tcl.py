"""Second-order time-convolutionless fidelity for a pure protected state.

With a Lorentzian reservoir the fidelity decays as

    F(t) = exp(-int_0^t dtau int_0^tau ds K(s, tau)),
    K(s, tau) = eta gamma0 Gamma exp(-Gamma s) eps(tau) eps(tau - s)
                * cos(Phi(tau) - Phi(tau - s)),

where Phi is the accumulated pulse phase.  The inner integral is exact on
each constant-rate panel; the outer one is adaptive Simpson with panels
split at every pulse edge and every requested output time.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import _core
from .curve import FidelityCurve
from .errors import DomainError
from .pulse import Control, NoControl, _dedup, rate_segments

OUTER_ATOL = 1e-10


@dataclass(frozen=True)
class ReservoirSpec:
    """Lorentzian reservoir; rates in units of gamma0, omega0 is informational."""

    gamma0: float = 1.0
    Gamma: float = 1.0
    omega0: float = 0.0

    def __post_init__(self):
        if not (self.gamma0 > 0 and math.isfinite(self.gamma0)):
            raise DomainError(f"gamma0 must be positive, got {self.gamma0}")
        if not (self.Gamma > 0 and math.isfinite(self.Gamma)):
            raise DomainError(f"Gamma must be positive, got {self.Gamma}")

    def spectral_density(self, omega):
        """Lorentzian J(omega) centred on omega0."""
        detuning = np.asarray(omega) - self.omega0
        return self.gamma0 * self.Gamma**2 / (2 * np.pi * (detuning**2 + self.Gamma**2))

    def to_dict(self) -> dict:
        return {"gamma0": self.gamma0, "Gamma": self.Gamma, "omega0": self.omega0}


@dataclass(frozen=True)
class TclProblem:
    eta: float
    reservoir: ReservoirSpec = field(default_factory=ReservoirSpec)
    control: Control = field(default_factory=NoControl)

    def __post_init__(self):
        if not (self.eta >= 0 and math.isfinite(self.eta)):
            raise DomainError(f"eta must be a finite nonnegative number, got {self.eta}")

    @property
    def prefactor(self) -> float:
        res = self.reservoir
        return self.eta * res.gamma0 * res.Gamma * self.control.epsilon**2

    def to_dict(self) -> dict:
        return {"eta": self.eta, "reservoir": self.reservoir.to_dict(),
                "control": self.control.to_dict()}


def correlation(res: ReservoirSpec, s: float) -> complex:
    """Reservoir correlation function G(s) = (gamma0 Gamma / 2) exp(-Gamma s)."""
    if not s >= 0:
        raise DomainError(f"s must be >= 0, got {s}")
    return complex(0.5 * res.gamma0 * res.Gamma * math.exp(-res.Gamma * s))


def correlation_numeric(res: ReservoirSpec, s: float, window: float = 40.0) -> complex:
    """G(s) by quadrature of J(omega) exp(i(omega0 - omega)s) over omega0 +- window*Gamma.

    Cross-check for :func:`correlation`.  The truncated window leaves a tail
    error of order ``2 sin(W s) / (pi W^2 s)`` relative to ``exp(-Gamma s)/Gamma``.
    """
    if not s >= 0:
        raise DomainError(f"s must be >= 0, got {s}")
    half = window * res.Gamma
    scale = res.gamma0 * res.Gamma**2 / (2 * np.pi)

    def lorentz(x):
        return scale / (x * x + res.Gamma**2)

    # symmetric window: the sine part cancels exactly
    if s == 0.0:
        re = 2 * integrate.quad(lorentz, 0.0, half, epsabs=0, epsrel=1e-13)[0]
    else:
        re = 2 * integrate.quad(lorentz, 0.0, half, weight="cos", wvar=s,
                                epsabs=0, epsrel=1e-13, limlst=200, limit=2000)[0]
    return complex(re, 0.0)


def kernel(problem: TclProblem, s: float, tau: float) -> float:
    """Integral kernel K(s, tau); negative when the phase lag exceeds pi/2."""
    if not (0 <= s <= tau):
        raise DomainError(f"kernel needs 0 <= s <= tau, got s={s}, tau={tau}")
    ctrl = problem.control
    lag = ctrl.phase_integral(tau) - ctrl.phase_integral(tau - s)
    return problem.prefactor * math.exp(-problem.reservoir.Gamma * s) * math.cos(lag)


def inner_integral(problem: TclProblem, tau: float) -> float:
    """``int_0^tau K(s, tau) ds`` assembled from closed-form damped-cosine pieces.

    Works directly in the lag variable s: between the images ``tau - b`` of
    the pulse edges b, the phase lag is ``a + rate * (s - s_a)``.
    """
    if not tau >= 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    if tau == 0.0:
        return 0.0
    ctrl = problem.control
    gamma = problem.reservoir.Gamma
    edges = _dedup(sorted({0.0, tau, *(tau - b for b in ctrl.breakpoints(0.0, tau))}))
    phi_tau = ctrl.phase_integral(tau)
    total = 0.0
    for s_a, s_b in zip(edges[:-1], edges[1:]):
        h = s_b - s_a
        lag = phi_tau - ctrl.phase_integral(max(tau - s_a, 0.0))
        rate = ctrl.lambda_at(max(tau - 0.5 * (s_a + s_b), 0.0))
        w = complex(-gamma, rate)
        total += (cmath.exp(complex(-gamma * s_a, lag)) * _cexpm1(w * h) / w).real
    return problem.prefactor * total


def _cexpm1(z: complex) -> complex:
    x, y = z.real, z.imag
    half = math.sin(0.5 * y)
    return complex(math.expm1(x) * math.cos(y) - 2.0 * half * half, math.exp(x) * math.sin(y))


def _check_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise DomainError("grid must be a non-empty 1-d sequence")
    if g[0] != 0.0:
        raise DomainError(f"grid must start at 0, got {g[0]}")
    if g.size > 1 and np.any(np.diff(g) <= 0):
        raise DomainError("grid must be strictly increasing")
    return g


def tcl_exponent(problem: TclProblem, grid, atol: float = OUTER_ATOL,
                 extra_breaks=()) -> np.ndarray:
    """``int_0^t dtau inner_integral(tau)`` at every grid time, in one pass.

    ``extra_breaks`` forces additional outer panel boundaries; results do not
    depend on them beyond the quadrature tolerance.
    """
    g = _check_grid(grid)
    t_end = float(g[-1])
    if t_end == 0.0:
        return np.zeros_like(g)
    extra = tuple(float(x) for x in extra_breaks)
    knots, rates = rate_segments(problem.control, t_end, extra)
    edges = np.union1d(np.union1d(knots, g), [x for x in extra if 0 < x < t_end])
    pref = problem.prefactor
    if pref == 0.0:
        return np.zeros_like(g)
    cum = np.asarray(_core.cumulative_exponent(
        knots, rates, problem.reservoir.Gamma, edges, atol / pref), dtype=float)
    return pref * cum[np.searchsorted(edges, g)]


def tcl_fidelity_curve(problem: TclProblem, grid, atol: float = OUTER_ATOL,
                       extra_breaks=()) -> FidelityCurve:
    g = _check_grid(grid)
    values = np.exp(-tcl_exponent(problem, g, atol, extra_breaks))
    meta = {"problem": problem.to_dict(), "outer_atol": atol, "backend": _core.BACKEND}
    return FidelityCurve(g, values, "tcl", meta)


def tcl_fidelity(problem: TclProblem, t: float, atol: float = OUTER_ATOL) -> float:
    """TCL fidelity at a single time."""
    if not t >= 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t == 0:
        return 1.0
    return float(math.exp(-tcl_exponent(problem, [0.0, t], atol)[-1]))


def closed_form_no_control(eta: float, res: ReservoirSpec, t):
    """``exp[-eta gamma0 (t + (exp(-Gamma t) - 1) / Gamma)]``; accepts arrays."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    G = res.Gamma
    out = np.exp(-eta * res.gamma0 * (t + np.expm1(-G * t) / G))
    return float(out) if out.ndim == 0 else out


def closed_form_constant_detuning(eta: float, res: ReservoirSpec, detuning: float, t):
    """Fidelity under a constant phase rate (a train with width == period).

    The inner integral is ``eta g0 G [G - e^{-G tau}(G cos l tau - l sin l tau)] / (G^2 + l^2)``
    and its time integral is elementary as well.
    """
    t = np.asarray(t, dtype=float)
    G, lam = res.Gamma, detuning
    w = complex(-G, lam)
    tail = ((G + 1j * lam) * -np.expm1(w * t) / (G - 1j * lam)).real
    expo = eta * res.gamma0 * G / (G * G + lam * lam) * (G * t - tail)
    out = np.exp(-expo)
    return float(out) if out.ndim == 0 else out
