# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels in ``_pykernels``.

Same algorithms, same constants, per-point scalar loops.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, expm1, sin, cos, fabs, ceil, M_PI

cnp.import_array()

cdef double _BIG = 1e250
cdef double _SMALL_X = 1e-3
cdef double _I_SERIES_MAX = 30.0
cdef double _SERIES_Y = 1e-6


cpdef int miller_start(int kmax, double xmax):
    cdef int k = kmax
    cdef int kx = <int>ceil(xmax)
    if kx > k:
        k = kx
    if k < 1:
        k = 1
    cdef int start = k + <int>sqrt(160.0 * k) + 20
    return start + (start & 1)


cdef void _jn_series_point(int kmax, double x, double[:, ::1] out, Py_ssize_t col) nogil:
    cdef double y = -0.25 * x * x
    cdef double lead = 1.0
    cdef double s, term
    cdef int k, m
    for k in range(kmax + 1):
        if k > 0:
            lead = lead * (0.5 * x) / k
        s = 1.0
        term = 1.0
        for m in range(1, 6):
            term = term * y / (m * (k + m))
            s = s + term
        out[k, col] = lead * s


cdef void _jn_miller_point(int kmax, int start, double x, double[:, ::1] out,
                           Py_ssize_t col) nogil:
    cdef double inv2x = 2.0 / x
    cdef double j_next = 0.0
    cdef double j_cur = 1e-300
    cdef double j_prev, norm = 0.0
    cdef int k, kk, i
    for k in range(start, 0, -1):
        j_prev = k * inv2x * j_cur - j_next
        j_next = j_cur
        j_cur = j_prev
        kk = k - 1
        if kk <= kmax:
            out[kk, col] = j_cur
        if kk > 0 and kk % 2 == 0:
            norm += 2.0 * j_cur
        if fabs(j_cur) > _BIG:
            j_cur /= _BIG
            j_next /= _BIG
            norm /= _BIG
            for i in range(kk, kmax + 1):
                out[i, col] /= _BIG
    norm += j_cur
    for i in range(kmax + 1):
        out[i, col] /= norm


def jn_table(kmax, x):
    """Bessel functions ``J_0 .. J_kmax`` at every point of ``x``."""
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=float).ravel()
    cdef Py_ssize_t n = xv.shape[0], i
    cdef int km = int(kmax)
    if n and np.min(xv) < 0:
        raise ValueError("jn_table requires x >= 0")
    res = np.zeros((km + 1, n))
    cdef double[:, ::1] out = res
    if n == 0:
        return res
    cdef double xmax = np.max(xv)
    cdef int start = miller_start(km, xmax)
    with nogil:
        for i in range(n):
            if xv[i] < _SMALL_X:
                _jn_series_point(km, xv[i], out, i)
            else:
                _jn_miller_point(km, start, xv[i], out, i)
    return res


cdef void _i_point(double x, double* s0out, double* s1out) nogil:
    cdef double y, t0, t1, s0, s1, pref, term, s, mu, e
    cdef int k, j
    if x <= _I_SERIES_MAX:
        y = 0.25 * x * x
        t0 = 1.0
        t1 = 0.5
        s0 = 1.0
        s1 = 0.5
        for k in range(1, 200):
            t0 = t0 * y / (k * k)
            t1 = t1 * y / (k * (k + 1))
            s0 += t0
            s1 += t1
            if t0 <= 1e-17 * s0:
                break
        e = exp(-x)
        s0out[0] = s0 * e
        s1out[0] = s1 * e
        return
    pref = 1.0 / sqrt(2.0 * M_PI * x)
    for j in range(2):
        mu = 4.0 * j
        term = 1.0
        s = 1.0
        for k in range(1, 60):
            term = -term * (mu - (2 * k - 1) * (2 * k - 1)) / (k * 8.0 * x)
            s += term
            if fabs(term) <= 1e-17 * fabs(s):
                break
        if j == 0:
            s0out[0] = pref * s
        else:
            s1out[0] = pref * s / x


def i0_i1x_scaled(x):
    """``exp(-x) I0(x)`` and ``exp(-x) I1(x) / x`` for ``x >= 0``."""
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=float).ravel()
    cdef Py_ssize_t n = xv.shape[0], i
    if n and np.min(xv) < 0:
        raise ValueError("i0_i1x_scaled requires x >= 0")
    r0 = np.empty(n)
    r1 = np.empty(n)
    cdef double[::1] o0 = r0
    cdef double[::1] o1 = r1
    with nogil:
        for i in range(n):
            _i_point(xv[i], &o0[i], &o1[i])
    return r0, r1


def adiabatic_fields(c, double t, double rabi, double gamma):
    """Real envelopes ``(fm, ge)`` of the adiabatic solution at cosines ``c``."""
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=float).ravel()
    cdef Py_ssize_t n = cv.shape[0], i
    rf = np.empty(n)
    rg = np.empty(n)
    cdef double[::1] fm = rf
    cdef double[::1] ge = rg
    cdef double b = 0.25 * gamma * t
    cdef double e = exp(-b)
    cdef double oc, aoc, y, cc, ss, r, sr, kap, ep, em, cosh_e, sinh_e, sinc_t
    with nogil:
        for i in range(n):
            oc = rabi * cv[i]
            aoc = fabs(oc)
            y = 0.25 * t * t * (aoc - 0.5 * gamma) * (aoc + 0.5 * gamma)
            if fabs(y) < _SERIES_Y:
                cc = 1.0 - y / 2.0 + y * y / 24.0 - y * y * y / 720.0
                ss = 1.0 - y / 6.0 + y * y / 120.0 - y * y * y / 5040.0
                fm[i] = e * (cc + b * ss)
                sinc_t = e * t * ss
            elif y > 0:
                r = sqrt(y)
                sr = sin(r) / r
                fm[i] = e * (cos(r) + b * sr)
                sinc_t = e * t * sr
            else:
                kap = sqrt(-y)
                ep = exp(-0.25 * t * t * oc * oc / (kap + b))
                em = exp(-kap - b)
                cosh_e = 0.5 * (ep + em)
                if kap > 0.5:
                    sinh_e = 0.5 * (ep - em)
                else:
                    sinh_e = 0.5 * em * expm1(2.0 * kap)
                fm[i] = cosh_e + b * sinh_e / kap
                sinc_t = t * sinh_e / kap
            ge[i] = 0.5 * oc * sinc_t
    return rf, rg
