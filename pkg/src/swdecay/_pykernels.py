"""Numpy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` function for function and serve as the
fallback when the compiled extension is unavailable.
"""
import math

import numpy as np

_BIG = 1e250
_SMALL_X = 1e-3        # ascending series below this argument
_I_SERIES_MAX = 30.0   # ascending series for I0, I1 up to here
_SERIES_Y = 1e-6       # |s t| < 1e-3


def miller_start(kmax, xmax):
    """Even starting order for the downward recurrence."""
    k = max(kmax, int(math.ceil(xmax)), 1)
    start = k + int(math.sqrt(160.0 * k)) + 20
    return start + (start & 1)


def _jn_series(kmax, x):
    # J_k(x) = (x/2)^k/k! * sum_m (-x^2/4)^m / (m! (k+1)...(k+m))
    out = np.zeros((kmax + 1, x.size))
    y = -0.25 * x * x
    lead = np.ones_like(x)
    for k in range(kmax + 1):
        if k > 0:
            lead = lead * (0.5 * x) / k
        s = np.ones_like(x)
        term = np.ones_like(x)
        for m in range(1, 6):
            term = term * y / (m * (k + m))
            s = s + term
        out[k] = lead * s
    return out


def jn_table(kmax, x):
    """Bessel functions ``J_0 .. J_kmax`` at every point of ``x``.

    Miller's downward recurrence normalised with
    ``J_0 + 2 (J_2 + J_4 + ...) = 1``; ascending series for small arguments.

    Returns an array of shape ``(kmax + 1, len(x))``.
    """
    x = np.ascontiguousarray(x, dtype=float).ravel()
    if np.any(x < 0):
        raise ValueError("jn_table requires x >= 0")
    kmax = int(kmax)
    out = np.zeros((kmax + 1, x.size))
    small = x < _SMALL_X
    if np.any(small):
        out[:, small] = _jn_series(kmax, x[small])
    big = ~small
    if not np.any(big):
        return out

    xb = x[big]
    start = miller_start(kmax, xb.max())
    inv2x = 2.0 / xb
    table = np.zeros((kmax + 1, xb.size))
    j_next = np.zeros_like(xb)          # J_{k+1}
    j_cur = np.full_like(xb, 1e-300)    # J_k, arbitrary seed
    norm = np.zeros_like(xb)
    for k in range(start, 0, -1):
        # J_{k-1} = (2k/x) J_k - J_{k+1}
        j_prev = k * inv2x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        kk = k - 1
        if kk <= kmax:
            table[kk] = j_cur
        if kk > 0 and kk % 2 == 0:
            norm += 2.0 * j_cur
        over = np.abs(j_cur) > _BIG
        if np.any(over):
            scale = np.where(over, 1.0 / _BIG, 1.0)
            j_cur *= scale
            j_next *= scale
            norm *= scale
            table *= scale
    norm += j_cur  # J_0
    out[:, big] = table / norm
    return out


def _i_series(x):
    # exp(-x) I0(x) and exp(-x) I1(x)/x from the ascending series
    y = 0.25 * x * x
    t0 = np.ones_like(x)
    t1 = np.full_like(x, 0.5)
    s0 = t0.copy()
    s1 = t1.copy()
    for k in range(1, 200):
        t0 = t0 * y / (k * k)
        t1 = t1 * y / (k * (k + 1))
        s0 += t0
        s1 += t1
        if np.all(t0 <= 1e-17 * s0):
            break
    e = np.exp(-x)
    return s0 * e, s1 * e


def _i_asym(x):
    # exp(-x) I_nu(x) ~ (2 pi x)^(-1/2) sum_k (-1)^k a_k(nu) / x^k
    pref = 1.0 / np.sqrt(2.0 * math.pi * x)
    res = []
    for mu in (0.0, 4.0):
        term = np.ones_like(x)
        s = np.ones_like(x)
        for k in range(1, 60):
            term = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
            s += term
            if np.all(np.abs(term) <= 1e-17 * np.abs(s)):
                break
        res.append(pref * s)
    return res[0], res[1] / x


def i0_i1x_scaled(x):
    """``exp(-x) I0(x)`` and ``exp(-x) I1(x) / x`` for ``x >= 0``.

    The second value tends to 1/2 at ``x = 0``.
    """
    x = np.ascontiguousarray(x, dtype=float).ravel()
    if np.any(x < 0):
        raise ValueError("i0_i1x_scaled requires x >= 0")
    s0 = np.empty_like(x)
    s1 = np.empty_like(x)
    lo = x <= _I_SERIES_MAX
    if np.any(lo):
        s0[lo], s1[lo] = _i_series(x[lo])
    hi = ~lo
    if np.any(hi):
        s0[hi], s1[hi] = _i_asym(x[hi])
    return s0, s1


def adiabatic_fields(c, t, rabi, gamma):
    """Real envelopes of the adiabatic solution at cosines ``c``.

    Returns ``(fm, ge)`` with ``phi_m = fm`` and
    ``phi_e = 1j * exp(-1j*arg(Omega)) * ge``. Uses the branch-point regular
    form ``exp(-gamma t/4) [cos(s t) + (gamma/4) sin(s t)/s]`` with
    ``s**2 = (|Omega c|**2 - gamma**2/4)/4``.
    """
    c = np.ascontiguousarray(c, dtype=float).ravel()
    t = float(t)
    b = 0.25 * gamma * t
    oc = rabi * c
    # y = (s t)^2, factored for accuracy at the branch point
    y = 0.25 * t * t * (np.abs(oc) - 0.5 * gamma) * (np.abs(oc) + 0.5 * gamma)
    fm = np.empty_like(c)
    sinc_t = np.empty_like(c)   # exp(-b) * sin(s t)/s

    ser = np.abs(y) < _SERIES_Y
    if np.any(ser):
        ys = y[ser]
        cc = 1.0 - ys / 2.0 + ys * ys / 24.0 - ys * ys * ys / 720.0
        ss = 1.0 - ys / 6.0 + ys * ys / 120.0 - ys * ys * ys / 5040.0
        e = math.exp(-b)
        fm[ser] = e * (cc + b * ss)
        sinc_t[ser] = e * t * ss

    osc = (~ser) & (y > 0)
    if np.any(osc):
        r = np.sqrt(y[osc])
        e = math.exp(-b)
        sr = np.sin(r) / r
        fm[osc] = e * (np.cos(r) + b * sr)
        sinc_t[osc] = e * t * sr

    dec = (~ser) & (y < 0)
    if np.any(dec):
        kap = np.sqrt(-y[dec])
        # kappa - b = -(t^2/4)|Omega c|^2 / (kappa + b), stable near the node
        ocd = oc[dec]
        ep = np.exp(-0.25 * t * t * ocd * ocd / (kap + b))   # exp(kappa - b)
        em = np.exp(-kap - b)
        cosh_e = 0.5 * (ep + em)
        sinh_e = np.where(kap > 0.5, 0.5 * (ep - em),
                          0.5 * em * np.expm1(2.0 * np.minimum(kap, 0.5)))
        fm[dec] = cosh_e + b * sinh_e / kap
        sinc_t[dec] = t * sinh_e / kap

    ge = 0.5 * oc * sinc_t
    return fm, ge
