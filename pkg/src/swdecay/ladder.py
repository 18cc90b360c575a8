"""Coupled diffraction-amplitude equations, integrated directly.

The ladder keeps the recoil anharmonicity ``n^2 omega_r`` and the Doppler
detuning ``n delta`` that the adiabatic solution drops, so it doubles as an
independent check of the analytic modules and as a probe of where the
adiabatic approximation breaks down.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .dynamics import PopulationSeries
from .errors import StepSizeUnderflow, TruncationExceeded
from .model import ModelParams, TimeGrid


@dataclass(frozen=True)
class LadderState:
    t: float
    a_m: np.ndarray = field(repr=False)
    a_e: np.ndarray = field(repr=False)

    @property
    def n_trunc(self) -> int:
        return (self.a_m.size - 1) // 2

    @property
    def orders(self) -> np.ndarray:
        n = self.n_trunc
        return np.arange(-n, n + 1)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.a_m) ** 2 + np.abs(self.a_e) ** 2))

    @classmethod
    def initial(cls, n_trunc: int) -> "LadderState":
        a_m = np.zeros(2 * n_trunc + 1, dtype=complex)
        a_m[n_trunc] = 1.0
        return cls(0.0, a_m, np.zeros(2 * n_trunc + 1, dtype=complex))


def _neighbours(a):
    # a_{n-1} + a_{n+1} with zeros beyond the truncation
    s = np.zeros_like(a)
    s[1:] += a[:-1]
    s[:-1] += a[1:]
    return s


def _detuning_diag(params, n_trunc):
    n = np.arange(-n_trunc, n_trunc + 1, dtype=float)
    return n * n * params.recoil + n * params.detuning


def rhs_full(params: ModelParams, state: LadderState):
    """Time derivatives ``(da_m/dt, da_e/dt)`` of the ladder amplitudes."""
    diag = _detuning_diag(params, state.n_trunc)
    om = params.omega
    dm = -1j * (diag * state.a_m - 0.25 * om * _neighbours(state.a_e))
    de = -1j * ((diag - 0.5j * params.gamma) * state.a_e
                - 0.25 * np.conj(om) * _neighbours(state.a_m))
    return dm, de


# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = _A[6] + (0.0,)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


class _System:
    """Flat complex vector ``[a_m, a_e, loss]``; ``loss`` accumulates gamma*sum|a_e|^2."""

    def __init__(self, params, n_trunc):
        self.size = 2 * n_trunc + 1
        self.diag = _detuning_diag(params, n_trunc)
        self.diag_e = self.diag - 0.5j * params.gamma
        self.om4 = 0.25 * params.omega
        self.om4c = np.conj(self.om4)
        self.gamma = params.gamma

    def __call__(self, y):
        s = self.size
        am, ae = y[:s], y[s:2 * s]
        out = np.empty_like(y)
        out[:s] = -1j * (self.diag * am - self.om4 * _neighbours(ae))
        out[s:2 * s] = -1j * (self.diag_e * ae - self.om4c * _neighbours(am))
        out[2 * s] = self.gamma * np.vdot(ae, ae).real
        return out


def _dopri(fun, y, t0, t1, h, rtol, atol, k1):
    """Advance ``y`` from ``t0`` to exactly ``t1``. Returns ``(y, h, k1, nsteps)``."""
    t = t0
    steps = 0
    while t < t1:
        h = min(h, t1 - t)
        if h < 1e-14 * max(1.0, abs(t)):
            raise StepSizeUnderflow(f"step size {h:.3g} underflow at t={t}")
        ks = [k1]
        for i in range(1, 7):
            yi = y + h * sum(a * k for a, k in zip(_A[i], ks) if a != 0.0)
            ks.append(fun(yi))
        y_new = y + h * sum(b * k for b, k in zip(_B5, ks) if b != 0.0)
        err = h * sum(e * k for e, k in zip(_E, ks) if e != 0.0)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            enorm = math.sqrt(np.mean(np.abs(err / scale) ** 2))
        if not math.isfinite(enorm):
            enorm = math.inf
        if enorm <= 1.0:
            t = t1 if h == t1 - t else t + h
            y = y_new
            k1 = ks[6]  # first-same-as-last
            steps += 1
            fac = 5.0 if enorm == 0 else min(5.0, 0.9 * enorm ** -0.2)
        else:
            fac = max(0.2, 0.9 * enorm ** -0.2)
        h *= fac
    return y, h, k1, steps


@dataclass(frozen=True)
class LadderResult:
    """Output of :func:`integrate`.

    ``pops_m``/``pops_e`` have shape ``(len(times), 2N+1)`` with orders
    ``-N..N``; ``loss`` is the accumulated ``gamma * integral sum |a_e|^2``.
    """

    series: PopulationSeries
    state: LadderState
    orders: np.ndarray
    pops_m: np.ndarray = field(repr=False)
    pops_e: np.ndarray = field(repr=False)
    boundary_norm: np.ndarray = field(repr=False)
    loss: np.ndarray = field(repr=False)
    amps_m: np.ndarray = field(repr=False)
    amps_e: np.ndarray = field(repr=False)
    steps: int = 0

    @property
    def norm(self) -> np.ndarray:
        return self.series.w_m + self.series.w_e

    def asymmetry(self) -> np.ndarray:
        """Largest ``|W_n - W_-n|`` over orders and channels at each time."""
        return np.maximum(np.abs(self.pops_m - self.pops_m[:, ::-1]).max(axis=1),
                          np.abs(self.pops_e - self.pops_e[:, ::-1]).max(axis=1))


def default_truncation(params: ModelParams, t_end: float) -> int:
    return math.ceil(params.rabi * t_end) + 16


def integrate(params: ModelParams, t_end: float | None = None, n_trunc: int | None = None,
              rtol: float = 1e-9, atol: float = 1e-12, times=None,
              tail_tol: float = 1e-12, max_trunc: int = 4096) -> LadderResult:
    """Integrate the ladder from ``a_0^(m) = 1`` with an adaptive Dormand-Prince 5(4) pair.

    Parameters
    ----------
    t_end : float, optional
        Final time; output at ``[0, t_end]`` unless ``times`` is given.
    n_trunc : int, optional
        Orders ``-N..N`` are kept, zero beyond. Default ``ceil(|Omega| t_end) + 16``.
        Doubled and the run restarted whenever the two outermost orders hold
        more than ``10 * tail_tol``.
    times : array_like, optional
        Output times (increasing, starting at or after 0).

    Raises
    ------
    StepSizeUnderflow, TruncationExceeded
    """
    if times is None:
        if t_end is None or t_end < 0:
            raise ValueError("need t_end >= 0 or explicit times")
        times = np.array([0.0, t_end]) if t_end > 0 else np.array([0.0])
    grid = times if isinstance(times, TimeGrid) else TimeGrid(times)
    t_out = grid.t
    n = n_trunc if n_trunc is not None else default_truncation(params, t_out[-1])
    if n < 1:
        raise ValueError("n_trunc must be >= 1")
    while True:
        res = _run(params, n, t_out, rtol, atol)
        if res.boundary_norm.max() <= 10.0 * tail_tol:
            return res
        if 2 * n > max_trunc:
            raise TruncationExceeded(
                f"boundary norm {res.boundary_norm.max():.3g} with N={n}; limit {max_trunc}")
        n *= 2


def _run(params, n, t_out, rtol, atol):
    sys_ = _System(params, n)
    s = sys_.size
    y = np.zeros(2 * s + 1, dtype=complex)
    y[n] = 1.0
    k1 = sys_(y)
    rate = params.rabi + params.gamma + params.recoil * n * n + abs(params.detuning) * n
    h = 0.01 / max(rate, 1e-3)
    t = 0.0
    nt = t_out.size
    amps_m = np.empty((nt, s), dtype=complex)
    amps_e = np.empty((nt, s), dtype=complex)
    loss = np.empty(nt)
    steps = 0
    for i, t1 in enumerate(t_out):
        if t1 > t:
            y, h, k1, ns = _dopri(sys_, y, t, t1, h, rtol, atol, k1)
            steps += ns
            t = t1
        amps_m[i] = y[:s]
        amps_e[i] = y[s:2 * s]
        loss[i] = y[2 * s].real
    pops_m = np.abs(amps_m) ** 2
    pops_e = np.abs(amps_e) ** 2
    edge = np.r_[0, 1, s - 2, s - 1]
    boundary = pops_m[:, edge].sum(axis=1) + pops_e[:, edge].sum(axis=1)
    series = PopulationSeries(t_out, pops_m.sum(axis=1), pops_e.sum(axis=1), "ladder")
    state = LadderState(float(t_out[-1]), amps_m[-1].copy(), amps_e[-1].copy())
    return LadderResult(series, state, np.arange(-n, n + 1), pops_m, pops_e, boundary,
                        loss, amps_m, amps_e, steps)


@dataclass(frozen=True)
class AdiabaticityProbe:
    times: np.ndarray
    d_m: np.ndarray
    d_e: np.ndarray
    full: LadderResult = field(repr=False)
    adiabatic: LadderResult = field(repr=False)


def adiabaticity_probe(params: ModelParams, times, **kwargs) -> AdiabaticityProbe:
    """Deviation of the full ladder from its zero-recoil counterpart.

    ``d_m(t) = |w_m(full) - w_m(recoil = 0)|``, likewise ``d_e``. Both runs
    share the truncation so the difference reflects the recoil term only.
    """
    grid = times if isinstance(times, TimeGrid) else TimeGrid(times)
    if "n_trunc" not in kwargs:
        kwargs["n_trunc"] = default_truncation(params, grid.t[-1])
    full = integrate(params, times=grid, **kwargs)
    kwargs["n_trunc"] = full.state.n_trunc
    adiab = integrate(replace(params, recoil=0.0), times=grid, **kwargs)
    d_m = np.abs(full.series.w_m - adiab.series.w_m)
    d_e = np.abs(full.series.w_e - adiab.series.w_e)
    return AdiabaticityProbe(grid.t, d_m, d_e, full, adiab)
