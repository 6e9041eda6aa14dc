# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_fallback``; same algorithms and call signatures."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, expm1, fabs, ceil, M_PI

cnp.import_array()

DEF MAX_DEPTH = 50
cdef double MAX_PHASE = 0.5 * M_PI


cdef inline void _advance(double vr, double vi, double rate, double gamma, double h,
                          double* outr, double* outi) noexcept nogil:
    cdef double em = expm1(-gamma * h)
    cdef double c = cos(rate * h)
    cdef double s = sin(rate * h)
    cdef double half = sin(0.5 * rate * h)
    cdef double omr = -(em * c - 2.0 * half * half)
    cdef double omi = -(em + 1.0) * s
    cdef double zr = 1.0 - omr
    cdef double zi = -omi
    # omz / (gamma - i rate)
    cdef double den = gamma * gamma + rate * rate
    cdef double qr = (omr * gamma - omi * rate) / den
    cdef double qi = (omi * gamma + omr * rate) / den
    outr[0] = (zr * vr - zi * vi) + qr
    outi[0] = (zr * vi + zi * vr) + qi


cdef inline double _f(double vr, double vi, double rate, double gamma, double h) noexcept nogil:
    cdef double r, i
    _advance(vr, vi, rate, gamma, h, &r, &i)
    return r


cdef struct Panel:
    double vr
    double vi
    double rate
    double gamma
    double base


cdef double _simpson(Panel* p, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) noexcept nogil:
    cdef double m = 0.5 * (a + b)
    cdef double lm = 0.5 * (a + m)
    cdef double rm = 0.5 * (m + b)
    cdef double flm = _f(p.vr, p.vi, p.rate, p.gamma, lm - p.base)
    cdef double frm = _f(p.vr, p.vi, p.rate, p.gamma, rm - p.base)
    cdef double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    cdef double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    cdef double delta = left + right - whole
    if depth >= MAX_DEPTH or fabs(delta) <= 15.0 * tol or m <= a or b <= m:
        return left + right + delta / 15.0
    return (_simpson(p, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
            + _simpson(p, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1))


cdef double _adaptive(Panel* p, double a, double b, double tol) noexcept nogil:
    if b <= a:
        return 0.0
    cdef double fa = _f(p.vr, p.vi, p.rate, p.gamma, a - p.base)
    cdef double fb = _f(p.vr, p.vi, p.rate, p.gamma, b - p.base)
    cdef double m = 0.5 * (a + b)
    cdef double fm = _f(p.vr, p.vi, p.rate, p.gamma, m - p.base)
    cdef double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson(p, a, b, fa, fm, fb, whole, tol, 0)


cdef double _sliced(Panel* p, double a, double b, double tol) noexcept nogil:
    # keep each start interval under MAX_PHASE of oscillation
    cdef Py_ssize_t n = <Py_ssize_t>ceil((b - a) * fabs(p.rate) / MAX_PHASE), i
    if n < 1:
        n = 1
    cdef double step = (b - a) / n, lo, hi, acc = 0.0
    for i in range(n):
        lo = a + i * step
        hi = b if i == n - 1 else lo + step
        acc += _adaptive(p, lo, hi, tol / n)
    return acc


def advance(v, double rate, double gamma, double h):
    cdef double r, i
    v = complex(v)
    _advance(v.real, v.imag, rate, gamma, h, &r, &i)
    return complex(r, i)


def panel_starts(knots, rates, double gamma):
    cdef double[::1] k = np.ascontiguousarray(knots, dtype=np.float64)
    cdef double[::1] rt = np.ascontiguousarray(rates, dtype=np.float64)
    cdef Py_ssize_t n = rt.shape[0], j
    out = np.zeros(n + 1, dtype=np.complex128)
    cdef double vr = 0.0, vi = 0.0, nr, ni
    for j in range(n):
        _advance(vr, vi, rt[j], gamma, k[j + 1] - k[j], &nr, &ni)
        vr = nr
        vi = ni
        out[j + 1] = complex(vr, vi)
    return list(out)


def memory_integrand(v0, double rate, double gamma, double h):
    v0 = complex(v0)
    return _f(v0.real, v0.imag, rate, gamma, h)


def cumulative_exponent(knots, rates, double gamma, edges, double atol):
    cdef double[::1] k = np.ascontiguousarray(knots, dtype=np.float64)
    cdef double[::1] rt = np.ascontiguousarray(rates, dtype=np.float64)
    cdef double[::1] e = np.ascontiguousarray(edges, dtype=np.float64)
    cdef Py_ssize_t nk = rt.shape[0], ne = e.shape[0], j, p = 0
    cdef double[::1] svr = np.zeros(nk + 1)
    cdef double[::1] svi = np.zeros(nk + 1)
    cdef double nr, ni
    for j in range(nk):
        _advance(svr[j], svi[j], rt[j], gamma, k[j + 1] - k[j], &nr, &ni)
        svr[j + 1] = nr
        svi[j + 1] = ni
    out_arr = np.zeros(ne)
    cdef double[::1] out = out_arr
    cdef double total = e[ne - 1] - e[0]
    cdef double acc = 0.0, a, b, tol
    cdef Panel panel
    with nogil:
        for j in range(ne - 1):
            a = e[j]
            b = e[j + 1]
            while p < nk - 1 and k[p + 1] <= a:
                p += 1
            if b > a:
                panel.vr = svr[p]
                panel.vi = svi[p]
                panel.rate = rt[p]
                panel.gamma = gamma
                panel.base = k[p]
                tol = atol * (b - a) / total
                if tol < 1e-300:
                    tol = 1e-300
                acc += _sliced(&panel, a, b, tol)
            out[j + 1] = acc
    return list(out_arr)
