"""Rectangular phase-pulse trains and their accumulated phase.

Times are in units of 1/gamma0 and rates in units of gamma0.  Pulse ``n``
(``n >= 1``) occupies ``[nT - width, nT)``; no pulse precedes t = 0.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DEDUP_TOL = 1e-14


@dataclass(frozen=True)
class NoControl:
    """No modulation: lambda(t) = 0 and a unit coupling amplitude."""

    epsilon: float = 1.0

    def lambda_at(self, t: float) -> float:
        _check_time(t)
        return 0.0

    def phase_integral(self, t: float) -> float:
        _check_time(t)
        return 0.0

    def breakpoints(self, t0: float, t1: float) -> list[float]:
        _check_interval(t0, t1)
        return []

    def to_dict(self) -> dict:
        return {"kind": "none", "epsilon": self.epsilon}


@dataclass(frozen=True)
class PulseTrain:
    """Periodic rectangular AC-Stark pulses of phase area ``intensity``."""

    period: float
    width: float
    intensity: float
    epsilon: float = 1.0

    def __post_init__(self):
        if not (self.period > 0 and math.isfinite(self.period)):
            raise DomainError(f"period must be positive, got {self.period}")
        if not 0 < self.width <= self.period:
            raise DomainError(
                f"width must satisfy 0 < width <= period, got width={self.width},"
                f" period={self.period}")
        if not (self.intensity >= 0 and math.isfinite(self.intensity)):
            raise DomainError(f"intensity must be >= 0, got {self.intensity}")

    @property
    def amplitude(self) -> float:
        """Rate lambda inside a pulse."""
        return self.intensity / self.width

    def lambda_at(self, t: float) -> float:
        _check_time(t)
        if t >= self.period - self.width and t % self.period >= self.period - self.width:
            return self.amplitude
        return 0.0

    def phase_integral(self, t: float) -> float:
        _check_time(t)
        T, w, L = self.period, self.width, self.intensity
        n = math.floor(t / T)
        frac = (t - (n + 1) * T + w) / w
        return n * L + L * min(max(frac, 0.0), 1.0)

    def breakpoints(self, t0: float, t1: float) -> list[float]:
        _check_interval(t0, t1)
        T, w = self.period, self.width
        n_lo = max(1, math.floor(t0 / T))
        n_hi = math.ceil((t1 + w) / T) + 1
        pts = []
        for n in range(n_lo, n_hi + 1):
            for p in (n * T - w, n * T):
                if t0 - DEDUP_TOL <= p <= t1 + DEDUP_TOL:
                    pts.append(min(max(p, t0), t1))
        return _dedup(sorted(pts))

    def to_dict(self) -> dict:
        return {"kind": "pulse", "period": self.period, "width": self.width,
                "intensity": self.intensity, "epsilon": self.epsilon}


Control = PulseTrain | NoControl


def _check_time(t):
    if not t >= 0:
        raise DomainError(f"time must be >= 0, got {t}")


def _check_interval(t0, t1):
    _check_time(t0)
    if t1 < t0:
        raise DomainError(f"interval end {t1} precedes start {t0}")


def _dedup(pts):
    out = []
    for p in pts:
        if not out or p - out[-1] > DEDUP_TOL:
            out.append(p)
    return out


def lambda_at(control: Control, t: float) -> float:
    return control.lambda_at(t)


def phase_integral(control: Control, t: float) -> float:
    """Accumulated phase ``int_0^t lambda``, evaluated in closed form."""
    return control.phase_integral(t)


def breakpoints(control: Control, t0: float, t1: float) -> list[float]:
    """Pulse edges in ``[t0, t1]``; lambda is constant between consecutive ones."""
    return control.breakpoints(t0, t1)


def rate_segments(control: Control, t_end: float,
                  extra: tuple[float, ...] = ()) -> tuple[np.ndarray, np.ndarray]:
    """Partition ``[0, t_end]`` into panels of constant lambda.

    Returns ``(knots, rates)`` with ``len(knots) == len(rates) + 1``,
    ``knots[0] == 0`` and ``knots[-1] == t_end``.  Adjacent panels with equal
    rate are merged unless separated by an ``extra`` boundary, so a zero
    intensity train yields the same partition as NoControl.
    """
    _check_time(t_end)
    if t_end == 0.0:
        return np.array([0.0, 0.0]), np.array([0.0])
    inner = [p for p in control.breakpoints(0.0, t_end) if DEDUP_TOL < p < t_end - DEDUP_TOL]
    forced = {p for p in extra if DEDUP_TOL < p < t_end - DEDUP_TOL}
    knots = _dedup(sorted({0.0, t_end, *inner, *forced}))
    rates = [control.lambda_at(0.5 * (a + b)) for a, b in zip(knots[:-1], knots[1:])]
    keep_k, keep_r = [knots[0]], []
    for i, r in enumerate(rates):
        if keep_r and r == keep_r[-1] and knots[i] not in forced:
            keep_k[-1] = knots[i + 1]
        else:
            keep_r.append(r)
            keep_k.append(knots[i + 1])
    return np.array(keep_k, dtype=float), np.array(keep_r, dtype=float)


_PI_RE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*$", re.I)


def parse_intensity(text: str | float) -> float:
    """Parse a phase area such as ``"3.14"``, ``"pi"``, ``"0.5pi"`` or ``"2*pi"``."""
    if isinstance(text, (int, float)):
        return float(text)
    m = _PI_RE.match(text)
    if m:
        return float(m.group(1) or 1.0) * math.pi
    try:
        return float(text)
    except ValueError:
        raise DomainError(f"cannot parse intensity {text!r}") from None
