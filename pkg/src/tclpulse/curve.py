"""FidelityCurve container and its CSV format."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError

METHODS = ("tcl", "exact", "bath-oracle", "closed-form")


@dataclass(frozen=True, eq=False)
class FidelityCurve:
    times: np.ndarray
    values: np.ndarray
    method: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        v = np.array(self.values, dtype=float)
        if self.method not in METHODS:
            raise DomainError(f"unknown method tag {self.method!r}")
        if t.shape != v.shape or t.ndim != 1:
            raise DomainError("times and values must be 1-d arrays of equal length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise DomainError("times must be strictly increasing")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.times.size

    def at(self, t: float) -> float:
        """Value at a grid time (exact match required)."""
        idx = np.searchsorted(self.times, t)
        if idx == self.times.size or self.times[idx] != t:
            raise DomainError(f"t={t} is not a grid point")
        return float(self.values[idx])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,F,method\n")
        for t, f in zip(self.times, self.values):
            buf.write(f"{t:.12g},{f:.12g},{self.method}\n")
        return buf.getvalue()

    def write_csv(self, path) -> Path:
        path = Path(path)
        with open(path, "w", newline="\n") as fh:
            fh.write(self.to_csv())
        return path

    @classmethod
    def read_csv(cls, path_or_text, metadata=None) -> "FidelityCurve":
        text = path_or_text
        if isinstance(path_or_text, Path) or "\n" not in str(path_or_text):
            text = Path(path_or_text).read_text()
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise DomainError("empty curve file")
        methods = {r["method"] for r in rows}
        if len(methods) != 1:
            raise DomainError(f"mixed method tags {sorted(methods)}")
        return cls([float(r["t"]) for r in rows], [float(r["F"]) for r in rows],
                   methods.pop(), dict(metadata or {}))


def uniform_grid(t_max: float = 3.0, points: int = 600) -> np.ndarray:
    if points < 2 or not t_max > 0:
        raise DomainError("grid needs points >= 2 and t_max > 0")
    return np.linspace(0.0, t_max, points)
