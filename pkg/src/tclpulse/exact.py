"""Exact single-excitation dynamics without control, and a discretized-bath oracle.

Only the symmetric combination (|10> + |01>)/sqrt(2) couples to the common
reservoir; its amplitude evolves by the Lorentzian memory function u(t)
while the antisymmetric combination is dark and stays constant.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .curve import FidelityCurve
from .errors import AccuracyError, DomainError
from .tcl import ReservoirSpec

DEGENERATE_TOL = 1e-9
NORM_DRIFT_LIMIT = 1e-6


@dataclass(frozen=True)
class SingleExcitationState:
    """``alpha|10> + beta|01>`` with the reservoir in vacuum."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")

    @classmethod
    def symmetric(cls):
        return cls(1 / math.sqrt(2), 1 / math.sqrt(2))

    @classmethod
    def antisymmetric(cls):
        return cls(1 / math.sqrt(2), -1 / math.sqrt(2))

    @property
    def norm2(self) -> float:
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2

    @property
    def bright(self) -> complex:
        return (self.alpha + self.beta) / math.sqrt(2)

    @property
    def dark(self) -> complex:
        return (self.alpha - self.beta) / math.sqrt(2)


def exact_amplitude_u(res: ReservoirSpec, t):
    """Decay amplitude of the bright state, ``e^{-G t/2}[cosh(k t/2) + (G/k) sinh(k t/2)]``.

    Evaluated in exponential form with complex ``k = sqrt(G (G - 4 g0))`` so
    that large Gamma neither overflows nor cancels.  Accepts arrays.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("t must be >= 0")
    if t_arr.ndim == 0 and t_arr == 0:
        return 1.0
    G, g0 = res.Gamma, res.gamma0
    if abs(G - 4 * g0) < DEGENERATE_TOL * g0:
        out = np.exp(-0.5 * G * t_arr) * (1.0 + 0.5 * G * t_arr)
    else:
        kappa = cmath.sqrt(G * (G - 4 * g0))
        # kappa - G computed without cancellation
        slow = -4 * g0 * G / (kappa + G)
        fast = -(kappa + G)
        z = (0.5 * (1 + G / kappa) * np.exp(0.5 * slow * t_arr)
             + 0.5 * (1 - G / kappa) * np.exp(0.5 * fast * t_arr))
        resid = np.max(np.abs(np.imag(z)), initial=0.0)
        if resid > 1e-12:
            raise ArithmeticError(f"u(t) has imaginary residue {resid:.3g}")
        out = np.real(z)
    out = np.where(t_arr == 0, 1.0, out)
    return float(out) if out.ndim == 0 else out


def exact_fidelity(state0: SingleExcitationState, res: ReservoirSpec, t):
    """``|alpha* C10(t) + beta* C01(t)|^2`` with real u(t); accepts arrays of times."""
    u = exact_amplitude_u(res, t)
    s0, a0 = state0.bright, state0.dark
    # alpha* C10 + beta* C01 reduces to |s0|^2 u + |a0|^2; dividing by the
    # (unit) norm keeps F(0) == 1 exactly in floating point
    bright, dark = abs(s0) ** 2, abs(a0) ** 2
    f = ((bright * u + dark) / (bright + dark)) ** 2
    return float(f) if np.ndim(f) == 0 else f


def exact_fidelity_curve(state0: SingleExcitationState, res: ReservoirSpec, grid) -> FidelityCurve:
    grid = np.asarray(grid, dtype=float)
    return FidelityCurve(grid, exact_fidelity(state0, res, grid), "exact",
                         {"reservoir": res.to_dict(),
                          "state": [_cpair(state0.alpha), _cpair(state0.beta)]})


def _cpair(z):
    z = complex(z)
    return [z.real, z.imag]


@dataclass(frozen=True, eq=False)
class BathDiscretization:
    """Uniform midpoint grid of reservoir modes around omega0.

    ``detunings`` are ``omega_l - omega0``; couplings satisfy
    ``g_l^2 = J(omega_l) * d_omega``.
    """

    reservoir: ReservoirSpec
    mode_count: int = 400
    half_width: float | None = None

    def __post_init__(self):
        if self.mode_count < 1:
            raise DomainError("mode_count must be >= 1")
        if self.half_width is None:
            object.__setattr__(self, "half_width", 20.0 * self.reservoir.Gamma)
        if not self.half_width > 0:
            raise DomainError("half_width must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.mode_count

    @property
    def detunings(self) -> np.ndarray:
        return -self.half_width + (np.arange(self.mode_count) + 0.5) * self.spacing

    @property
    def couplings(self) -> np.ndarray:
        res = self.reservoir
        return np.sqrt(res.spectral_density(res.omega0 + self.detunings) * self.spacing)

    def window_mass(self) -> float:
        """Exact ``int J`` over the window, to compare with ``sum g_l^2``."""
        res = self.reservoir
        return res.gamma0 * res.Gamma / math.pi * math.atan(self.half_width / res.Gamma)

    def to_dict(self) -> dict:
        return {"modes": self.mode_count, "half_width": self.half_width,
                "reservoir": self.reservoir.to_dict()}


def _rhs(y, det, g):
    # y = [C10, C01, C_1..C_L]; frame rotating at omega0
    out = np.empty_like(y)
    pull = -1j * np.dot(g, y[2:])
    out[0] = pull
    out[1] = pull
    out[2:] = -1j * (det * y[2:] + g * (y[0] + y[1]))
    return out


def bath_oracle_evolve(state0: SingleExcitationState, disc: BathDiscretization, grid,
                       dt: float = 1e-3, return_norm_drift: bool = False):
    """Integrate the single-excitation Schrodinger equation with classical RK4.

    Each grid interval is split into the fewest equal steps not longer than
    ``dt``.  Raises AccuracyError when the total norm drifts above 1e-6.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or grid[0] != 0.0:
        raise DomainError("grid must be a 1-d array starting at 0")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be strictly increasing")
    if not dt > 0:
        raise DomainError("dt must be positive")
    det, g = disc.detunings, disc.couplings
    y = np.zeros(disc.mode_count + 2, dtype=complex)
    y[0], y[1] = state0.alpha, state0.beta
    bra = np.conj([state0.alpha, state0.beta]) / state0.norm2
    values = [abs(bra @ y[:2]) ** 2]
    drift = 0.0
    for t0, t1 in zip(grid[:-1], grid[1:]):
        n = max(1, math.ceil((t1 - t0) / dt - 1e-9))
        h = (t1 - t0) / n
        for _ in range(n):
            k1 = _rhs(y, det, g)
            k2 = _rhs(y + 0.5 * h * k1, det, g)
            k3 = _rhs(y + 0.5 * h * k2, det, g)
            k4 = _rhs(y + h * k3, det, g)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        drift = max(drift, abs(np.vdot(y, y).real - 1.0))
        if drift > NORM_DRIFT_LIMIT:
            raise AccuracyError(
                f"norm drift {drift:.3g} at t={t1:.4g} exceeds {NORM_DRIFT_LIMIT}; reduce dt",
                drift=drift)
        values.append(abs(bra @ y[:2]) ** 2)
    curve = FidelityCurve(grid, values, "bath-oracle",
                          {"discretization": disc.to_dict(), "dt": dt, "norm_drift": drift,
                           "state": [_cpair(state0.alpha), _cpair(state0.beta)]})
    return (curve, drift) if return_norm_drift else curve
