"""Entanglement preservation of two bosonic oscillators in a common Lorentzian
reservoir under rectangular phase-pulse control, via the second-order
time-convolutionless fidelity."""

__version__ = "0.1.0"

from .control import SweepSpec, optimize_fidelity, sweep
from .curve import FidelityCurve
from .exact import (BathDiscretization, SingleExcitationState, bath_oracle_evolve,
                    exact_amplitude_u, exact_fidelity)
from .fock import (DensityMatrix, FockBasis, StateVector, apply_collective_lowering,
                   eta, ewl_state, fidelity, sigma_bar)
from .pulse import NoControl, PulseTrain, breakpoints, lambda_at, phase_integral
from .tcl import (ReservoirSpec, TclProblem, closed_form_no_control, correlation,
                  inner_integral, kernel, tcl_fidelity, tcl_fidelity_curve)

__all__ = [
    "BathDiscretization", "DensityMatrix", "FidelityCurve", "FockBasis", "NoControl",
    "PulseTrain", "ReservoirSpec", "SingleExcitationState", "StateVector", "SweepSpec",
    "TclProblem", "apply_collective_lowering", "bath_oracle_evolve", "breakpoints",
    "closed_form_no_control", "correlation", "eta", "ewl_state", "exact_amplitude_u",
    "exact_fidelity", "fidelity", "inner_integral", "kernel", "lambda_at",
    "optimize_fidelity", "phase_integral", "sigma_bar", "sweep", "tcl_fidelity",
    "tcl_fidelity_curve",
]
