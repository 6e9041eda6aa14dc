"""Pure-Python kernels, used when the compiled extension is unavailable.

The memory integral of the TCL generator is carried as the complex state

    V(tau) = int_0^tau exp(-Gamma (tau - u)) exp(i (Phi(tau) - Phi(u))) du

which obeys dV/dtau = (i lambda - Gamma) V + 1.  On a panel of constant
lambda this has a closed-form propagator, so V at any point costs O(1) once
the panel-start values are known.
"""
import math

MAX_DEPTH = 50
# largest phase advance lambda*h allowed in one Simpson start interval; a
# longer oscillatory span can alias onto a falsely converged first estimate
MAX_PHASE = 0.5 * math.pi


def _one_minus_z(rate, gamma, h):
    # 1 - exp((i rate - gamma) h), written to avoid cancellation for small h
    em = math.expm1(-gamma * h)
    c = math.cos(rate * h)
    s = math.sin(rate * h)
    half = math.sin(0.5 * rate * h)
    re = -(em * c - 2.0 * half * half)
    im = -(em + 1.0) * s
    return complex(re, im)


def advance(v, rate, gamma, h):
    """Propagate V across a constant-rate span of length h."""
    omz = _one_minus_z(rate, gamma, h)
    return (1.0 - omz) * v + omz / complex(gamma, -rate)


def panel_starts(knots, rates, gamma):
    out = [0j]
    for k in range(len(rates)):
        out.append(advance(out[-1], rates[k], gamma, knots[k + 1] - knots[k]))
    return out


def memory_integrand(v0, rate, gamma, h):
    """Re V at offset h into a panel that starts with state v0."""
    return advance(v0, rate, gamma, h).real


def _simpson(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth >= MAX_DEPTH or abs(delta) <= 15.0 * tol or m <= a or b <= m:
        return left + right + delta / 15.0
    return (_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
            + _simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1))


def adaptive_simpson(f, a, b, tol):
    if b <= a:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson(f, a, b, fa, fm, fb, whole, tol, 0)


def cumulative_exponent(knots, rates, gamma, edges, atol):
    """Running integral of Re V from 0 to every entry of ``edges``.

    ``edges`` must be ascending, start at ``knots[0]``, end at ``knots[-1]``
    and contain every knot, so each edge interval sits inside one panel.
    Each interval gets a share of ``atol`` proportional to its length.
    """
    knots = [float(x) for x in knots]
    rates = [float(x) for x in rates]
    edges = [float(x) for x in edges]
    starts = panel_starts(knots, rates, gamma)
    total = edges[-1] - edges[0]
    out = [0.0] * len(edges)
    acc = 0.0
    k = 0
    last = len(rates) - 1
    for j in range(len(edges) - 1):
        a, b = edges[j], edges[j + 1]
        while k < last and knots[k + 1] <= a:
            k += 1
        if b > a:
            base, v0, rate = knots[k], starts[k], rates[k]
            tol = max(atol * (b - a) / total, 1e-300)
            n = max(1, math.ceil((b - a) * abs(rate) / MAX_PHASE))
            step = (b - a) / n
            for i in range(n):
                lo = a + i * step
                hi = b if i == n - 1 else lo + step
                acc += adaptive_simpson(
                    lambda tau: memory_integrand(v0, rate, gamma, tau - base),
                    lo, hi, tol / n)
        out[j + 1] = acc
    return out
