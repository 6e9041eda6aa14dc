"""Truncated two-mode Fock space, collective ladder algebra and fidelity.

Basis kets are ordered lexicographically in the occupations with mode A as
the major index, i.e. ``index(n_A, n_B) = n_A * d + n_B``.  This ordering is
part of the serialized format and must not change.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionError, DomainError, InvalidStateError, TruncationError

DEFAULT_DIM = 4
NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
EIG_CLAMP = 1e-10
SUPPORT_TOL = 1e-14


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FockBasis:
    """Product basis of ``mode_count`` oscillators truncated at ``per_mode_dim`` levels."""

    per_mode_dim: int = DEFAULT_DIM
    mode_count: int = 2

    def __post_init__(self):
        if self.per_mode_dim < 2:
            raise DomainError(f"per_mode_dim must be >= 2, got {self.per_mode_dim}")
        if self.mode_count < 1:
            raise DomainError(f"mode_count must be >= 1, got {self.mode_count}")

    @property
    def size(self) -> int:
        return self.per_mode_dim ** self.mode_count

    @cached_property
    def occupations(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(range(self.per_mode_dim), repeat=self.mode_count))

    def index(self, occupation: Sequence[int]) -> int:
        if len(occupation) != self.mode_count:
            raise DimensionError(f"expected {self.mode_count} occupations, got {len(occupation)}")
        idx = 0
        for n in occupation:
            if not 0 <= n < self.per_mode_dim:
                raise TruncationError(
                    f"occupation {tuple(occupation)} exceeds truncation d={self.per_mode_dim}",
                    required_dim=max(occupation) + 1,
                )
            idx = idx * self.per_mode_dim + n
        return idx

    def lowering(self, mode: int) -> np.ndarray:
        """Matrix of the annihilation operator of one mode."""
        d = self.per_mode_dim
        a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1)
        factors = [np.eye(d)] * self.mode_count
        factors[mode] = a
        out = factors[0]
        for f in factors[1:]:
            out = np.kron(out, f)
        return out

    @cached_property
    def collective_lowering(self) -> np.ndarray:
        """Matrix of ``a_A + a_B`` (sum over all modes)."""
        return sum(self.lowering(m) for m in range(self.mode_count))

    def max_level(self, weights: np.ndarray) -> int:
        """Highest single-mode occupation carrying weight above SUPPORT_TOL."""
        occ = np.array(self.occupations)
        mask = np.abs(weights) > SUPPORT_TOL
        if not mask.any():
            return 0
        return int(occ[mask].max())


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized ket on a FockBasis.  Normalization happens at construction."""

    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amps.shape != (self.basis.size,):
            raise DimensionError(
                f"expected {self.basis.size} amplitudes, got {amps.shape[0]}")
        norm = np.linalg.norm(amps)
        if not np.isfinite(norm) or norm == 0.0:
            raise DomainError("state vector has zero or non-finite norm")
        object.__setattr__(self, "amplitudes", _frozen(amps / norm))

    @classmethod
    def from_occupations(cls, terms: Mapping[tuple[int, ...], complex],
                         per_mode_dim: int = DEFAULT_DIM) -> "StateVector":
        """Build ``sum c |n_A n_B>`` from a ``{(n_A, n_B): c}`` mapping."""
        basis = FockBasis(per_mode_dim)
        amps = np.zeros(basis.size, dtype=complex)
        for occ, c in terms.items():
            amps[basis.index(occ)] += c
        return cls(basis, amps)

    def to_json(self) -> str:
        return json.dumps({
            "per_mode_dim": self.basis.per_mode_dim,
            "amplitudes": [[float(c.real), float(c.imag)] for c in self.amplitudes],
        })

    @classmethod
    def from_json(cls, text: str | Mapping) -> "StateVector":
        data = json.loads(text) if isinstance(text, str) else dict(text)
        try:
            d = int(data["per_mode_dim"])
            pairs = data["amplitudes"]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed state JSON: {exc}") from None
        amps = np.array([complex(re, im) for re, im in pairs])
        return cls(FockBasis(d), amps)

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(self.basis, np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "StateVector") -> complex:
        _check_same_basis(self.basis, other.basis)
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace matrix on a FockBasis."""

    basis: FockBasis
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        n = self.basis.size
        if m.shape != (n, n):
            raise DimensionError(f"expected {n}x{n} matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise InvalidStateError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > NORM_TOL:
            raise InvalidStateError(f"density matrix has trace {np.trace(m).real:.3g}, not 1")
        object.__setattr__(self, "entries", _frozen(m))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Plain operator on a FockBasis, no positivity or trace constraint."""

    basis: FockBasis
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        n = self.basis.size
        if m.shape != (n, n):
            raise DimensionError(f"expected {n}x{n} matrix, got {m.shape}")
        object.__setattr__(self, "entries", _frozen(m))

    def expectation(self, state: StateVector) -> complex:
        _check_same_basis(self.basis, state.basis)
        return complex(np.vdot(state.amplitudes, self.entries @ state.amplitudes))


def _check_same_basis(a: FockBasis, b: FockBasis):
    if a != b:
        raise DimensionError(f"basis mismatch: {a} vs {b}")


def apply_collective_lowering(state: StateVector, basis: FockBasis | None = None) -> np.ndarray:
    """Return the unnormalized amplitudes of ``(a_A + a_B)|state>``.

    The result may be the zero vector (dark states), so a raw array is
    returned rather than a StateVector.
    """
    if basis is not None:
        _check_same_basis(basis, state.basis)
    return state.basis.collective_lowering @ state.amplitudes


def sigma_bar(sigma: DensityMatrix) -> OperatorMatrix:
    """The commutator ``[(a_A^+ + a_B^+), (a_A + a_B) sigma]``.

    Raising after lowering can move one quantum between the modes, so the
    truncation must leave one spare level above the occupied ones.
    """
    basis = sigma.basis
    rho = sigma.entries
    weights = np.abs(rho).sum(axis=0) + np.abs(rho).sum(axis=1)
    top = basis.max_level(weights)
    if top > basis.per_mode_dim - 2:
        raise TruncationError(
            f"sigma occupies level {top}; per_mode_dim must be at least {top + 2}"
            f" (got {basis.per_mode_dim})",
            required_dim=top + 2,
        )
    a = basis.collective_lowering
    ad = a.conj().T
    return OperatorMatrix(basis, ad @ (a @ rho) - (a @ rho) @ ad)


def eta(chi: StateVector) -> float:
    """Leakage coefficient ``<chi| sigma_bar(|chi><chi|) |chi>``."""
    value = sigma_bar(chi.projector()).expectation(chi)
    if abs(value.imag) > 1e-12:
        raise InvalidStateError(f"eta has imaginary part {value.imag:.3g}")
    return max(value.real, 0.0)


def _psd_sqrt(m: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
    if np.max(np.abs(m - m.conj().T), initial=0.0) > EIG_CLAMP:
        raise InvalidStateError(f"{name} is not Hermitian")
    w, v = np.linalg.eigh(m)
    if w.min() < -EIG_CLAMP:
        raise InvalidStateError(f"{name} has negative eigenvalue {w.min():.3g}")
    # eigenvalues below the numerical-rank cutoff are round-off, not weight
    cutoff = w.size * np.finfo(float).eps * max(abs(w).max(), 1.0)
    w = np.where(w > cutoff, w, 0.0)
    return w, (v * np.sqrt(w)) @ v.conj().T


def fidelity(x, y) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(x) y sqrt(x)))**2``.

    Accepts DensityMatrix instances or raw square arrays.  Square roots go
    through Hermitian eigendecompositions; eigenvalues in ``[-1e-10, 0)``
    are treated as round-off and clamped, anything more negative is an error.
    """
    if isinstance(x, DensityMatrix) and isinstance(y, DensityMatrix):
        _check_same_basis(x.basis, y.basis)
    xm = np.asarray(getattr(x, "entries", x), dtype=complex)
    ym = np.asarray(getattr(y, "entries", y), dtype=complex)
    if xm.shape != ym.shape:
        raise DimensionError(f"shape mismatch {xm.shape} vs {ym.shape}")
    _, sx = _psd_sqrt(xm, "x")
    _, sy = _psd_sqrt(ym, "y")
    # tr sqrt(sqrt(x) y sqrt(x)) is the trace norm of sqrt(x) sqrt(y)
    raw = float(np.sum(np.linalg.svd(sx @ sy, compute_uv=False)) ** 2)
    if not -EIG_CLAMP <= raw <= 1.0 + EIG_CLAMP:
        raise InvalidStateError(f"fidelity {raw!r} outside [0, 1]")
    return min(max(raw, 0.0), 1.0)


_QUBIT_BLOCK = ((0, 0), (0, 1), (1, 0), (1, 1))


def ewl_state(r: float, epsilon: StateVector) -> DensityMatrix:
    """Extended Werner-like state ``r|e><e| + (1-r)/4 * 1_qubit``."""
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"r must lie in [0, 1], got {r}")
    basis = epsilon.basis
    block = [basis.index(o) for o in _QUBIT_BLOCK]
    outside = np.delete(epsilon.amplitudes, block)
    if np.any(np.abs(outside) > SUPPORT_TOL):
        raise DomainError("epsilon has support outside the two-qubit block")
    ident = np.zeros((basis.size, basis.size))
    ident[block, block] = 1.0
    return DensityMatrix(basis, r * epsilon.projector().entries + (1.0 - r) / 4.0 * ident)


# Named protected states.
def bell_phi(alpha=1 / np.sqrt(2), beta=1 / np.sqrt(2), per_mode_dim=DEFAULT_DIM):
    return StateVector.from_occupations({(1, 1): alpha, (0, 0): beta}, per_mode_dim)


def bell_psi(alpha=1 / np.sqrt(2), beta=1 / np.sqrt(2), per_mode_dim=DEFAULT_DIM):
    return StateVector.from_occupations({(1, 0): alpha, (0, 1): beta}, per_mode_dim)


def dark_state(per_mode_dim=DEFAULT_DIM):
    return bell_psi(1 / np.sqrt(2), -1 / np.sqrt(2), per_mode_dim)


def qutrit_example(per_mode_dim=DEFAULT_DIM):
    return StateVector.from_occupations({(2, 2): 1.0, (1, 1): 1.0, (0, 0): 2.0}, per_mode_dim)


PRESETS = {
    "bell-phi": bell_phi,
    "bell-psi": bell_psi,
    "dark": dark_state,
    "qutrit-example": qutrit_example,
}
