"""Exception types raised by tclpulse."""


class TclPulseError(Exception):
    """Base class for all library errors."""


class DomainError(TclPulseError, ValueError):
    """An argument lies outside the domain of an operation."""


class DimensionError(TclPulseError, ValueError):
    """Operands live on incompatible Fock bases."""


class TruncationError(TclPulseError, ValueError):
    """The Fock truncation is too small for the requested operation."""

    def __init__(self, message, required_dim=None):
        super().__init__(message)
        self.required_dim = required_dim


class InvalidStateError(TclPulseError, ValueError):
    """A matrix is not a valid density matrix."""


class AccuracyError(TclPulseError, RuntimeError):
    """A fixed-step integration drifted beyond its accuracy budget."""

    def __init__(self, message, drift=None):
        super().__init__(message)
        self.drift = drift


class NumericalError(TclPulseError, ArithmeticError):
    """A computation produced a non-finite value."""


class EmptyResultError(TclPulseError, ValueError):
    """Every requested sample was infeasible."""
