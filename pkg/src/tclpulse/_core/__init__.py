"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise the
pure-Python ``_fallback`` module with identical semantics.  Setting the
environment variable ``TCLPULSE_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _fallback

try:
    if os.environ.get("TCLPULSE_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _backend
    BACKEND = "cython"
except ImportError:
    _backend = _fallback
    BACKEND = "python"

advance = _backend.advance
panel_starts = _backend.panel_starts
memory_integrand = _backend.memory_integrand
cumulative_exponent = _backend.cumulative_exponent


def backends():
    """Map of available backend name -> module, for tests and benchmarks."""
    found = {"python": _fallback}
    try:
        from . import _kernels
        found["cython"] = _kernels
    except ImportError:
        pass
    return found
