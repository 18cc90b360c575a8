"""Diffraction-order amplitudes and partial probabilities.

Order ``n`` is the photon-exchange index: the atom carries momentum
``p0 + n k`` and the wavefunction is ``phi(xi) = sum_n a_n exp(i n xi)`` over
the ``2 pi`` period of ``cos(xi)``. The metastable channel occupies even
orders and the excited channel odd orders.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dynamics import _fields
from .errors import GridNotConverged, TailNotConverged
from .model import ModelParams
from .quadrature import integrate


@dataclass(frozen=True)
class DiffractionSpectrum:
    t: float
    orders: np.ndarray
    a_m: np.ndarray = field(repr=False)
    a_e: np.ndarray = field(repr=False)

    @property
    def w_m(self) -> np.ndarray:
        return np.abs(self.a_m) ** 2

    @property
    def w_e(self) -> np.ndarray:
        return np.abs(self.a_e) ** 2

    def order(self, n: int, channel: str) -> complex:
        i = int(n) + (self.orders.size - 1) // 2
        return (self.a_m if channel == "m" else self.a_e)[i]

    def rows(self):
        """``(t, n, channel, re_a, im_a, w)`` rows, m channel first."""
        for ch, a in (("m", self.a_m), ("e", self.a_e)):
            for n, v in zip(self.orders, a):
                yield self.t, int(n), ch, v.real, v.imag, abs(v) ** 2


def _dft(params, t, n_max, m):
    xi = 2.0 * math.pi * np.arange(m) / m
    fm, ge = _fields(params, xi, t)
    phase = 1j * np.exp(-1j * params.rabi_phase)
    am = np.fft.fft(fm) / m
    ae = np.fft.fft(ge) / m * phase
    idx = np.arange(-n_max, n_max + 1) % m
    return am[idx], ae[idx]


def amplitudes(params: ModelParams, t: float, n_max: int, tol: float = 1e-10,
               max_points: int = 1 << 22) -> DiffractionSpectrum:
    """Amplitudes ``a_n`` for ``|n| <= n_max`` by a converged uniform-grid DFT.

    The sample count starts at ``8 n_max`` (power of two, at least 256) and
    doubles until no amplitude changes by more than ``tol``.

    Raises
    ------
    GridNotConverged
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    m = 256
    while m < 8 * n_max:
        m *= 2
    # the solution varies on the scale k dx and oscillates ~ |Omega| t / 2
    scale = params.rabi * t
    while m < 4 * scale:
        m *= 2
    am, ae = _dft(params, t, n_max, m)
    while True:
        m *= 2
        if m > max_points:
            raise GridNotConverged(f"DFT not converged with {max_points} points")
        am2, ae2 = _dft(params, t, n_max, m)
        change = max(np.abs(am2 - am).max(), np.abs(ae2 - ae).max())
        am, ae = am2, ae2
        if change < tol:
            break
    return DiffractionSpectrum(float(t), np.arange(-n_max, n_max + 1), am, ae)


def _integrands(a, b, kmax):
    """Integrand rows for all closed-form partials at once.

    Rows ``0..K`` hold the metastable integrand for orders ``2n`` and rows
    ``K+1..2K+1`` the excited integrand for orders ``2n+1`` where
    ``K = kmax // 2``. Exponential prefactors are folded into scaled
    modified Bessel functions.
    """
    nm = kmax // 2

    def f(z):
        u = b * np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        s0, s1x = _kernels.i0_i1x_scaled(u)
        decay = np.exp(u - b)
        i0 = s0 * decay                    # exp(-b) I0(u)
        bracket = (b * s1x + s0) * decay   # exp(-b)[I1(u)/sqrt(1-z^2) + I0(u)]
        jt = _kernels.jn_table(2 * nm + 2, a * z)
        even = jt[0:2 * nm + 1:2]
        rows_m = even * bracket
        rows_e = (jt[2:2 * nm + 3:2] - even) * i0
        return np.vstack([rows_m, rows_e])
    return f, nm


def partials(params: ModelParams, t: float, n_max: int, tol: float = 1e-12):
    """Closed-form partial probabilities for all orders up to ``n_max``.

    Returns ``(w_m, w_e)`` where ``w_m[j] = W_{2j}^(m)`` and
    ``w_e[j] = W_{2j+1}^(e)`` for ``j = 0 .. n_max``. Valid for the
    adiabatic, normal-incidence case (recoil and detuning ignored).

    Raises
    ------
    QuadratureNotConverged
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    n_max = int(n_max)
    a = 0.5 * params.rabi * t
    b = 0.25 * params.gamma * t
    f, nm = _integrands(a, b, 2 * n_max)
    if t == 0:
        w_m = np.zeros(n_max + 1)
        w_m[0] = 1.0
        return w_m, np.zeros(n_max + 1)
    # breakpoints at a z spacing resolving the Bessel oscillation ~ 1/a
    nb = int(min(max(a, 1.0), 400))
    val, _ = integrate(f, 0.0, 1.0, atol=tol, rtol=1e-12,
                       breakpoints=np.linspace(0.0, 1.0, nb + 1))
    jend = _kernels.jn_table(2 * nm, np.array([a]))[0::2, 0]
    amp_m = math.exp(-b) * jend + b * val[:nm + 1]
    amp_e = 0.5 * a * val[nm + 1:]
    return amp_m**2, amp_e**2


def partial_m(params: ModelParams, t: float, n: int, tol: float = 1e-12) -> float:
    """Metastable partial probability ``W_{2n}^(m)(t)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return float(partials(params, t, n, tol)[0][n])


def partial_e(params: ModelParams, t: float, n: int, tol: float = 1e-12) -> float:
    """Excited partial probability ``W_{2n+1}^(e)(t)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return float(partials(params, t, n, tol)[1][n])


def totals_from_sum(params: ModelParams, t: float, tail_tol: float = 1e-12,
                    n_limit: int | None = None):
    """Total populations as sums over diffraction orders.

    Both mirror orders ``+n`` and ``-n`` are counted. Shells are added until
    the two outermost ones hold less than ``tail_tol``.

    Returns
    -------
    w_m, w_e, n_used
        ``n_used`` is the highest physical order included.

    Raises
    ------
    TailNotConverged
        If more than ``n_limit`` orders (default ``4 ceil(|Omega| t) + 32``)
        would be needed.
    """
    if not tail_tol > 0:
        raise ValueError("tail_tol must be > 0")
    if n_limit is None:
        n_limit = 4 * math.ceil(params.rabi * t) + 32
    if t == 0:
        return 1.0, 0.0, 1
    k = math.ceil(0.25 * params.rabi * t) + 6
    while True:
        if 2 * k + 1 > n_limit:
            raise TailNotConverged(f"mode sum needs more than {n_limit} orders")
        wm, we = partials(params, t, k, tol=min(1e-12, 0.1 * tail_tol))
        tail = 2.0 * (wm[-2:].sum() + we[-2:].sum())
        if tail < tail_tol:
            break
        new_k = min(2 * k, (n_limit - 1) // 2)
        if new_k <= k:
            raise TailNotConverged(f"mode sum tail {tail:.3g} >= {tail_tol:.3g} at order limit {n_limit}")
        k = new_k
    w_m = wm[0] + 2.0 * wm[1:].sum()
    w_e = 2.0 * we.sum()
    return float(w_m), float(w_e), 2 * k + 1
