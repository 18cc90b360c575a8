"""Exact solution of the adiabatic initial-value problem.

At every position the atom is a damped two-level system driven with the
local Rabi frequency ``Omega cos(xi)``; initially ``phi_m = 1, phi_e = 0``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import BranchDegenerate
from .model import ModelParams, SpatialGrid, TimeGrid, cos_xi, require_decay
from .quadrature import integrate
from .quasienergy import gamma_pm

METHODS = ("quadrature", "mode_sum", "ladder", "asymptotic", "gaussian", "two_level")


@dataclass(frozen=True)
class BranchCoefficients:
    a_m_plus: complex
    a_m_minus: complex
    a_e_plus: complex
    a_e_minus: complex


@dataclass(frozen=True)
class FieldProfile:
    grid: SpatialGrid
    t: float
    phi_m: np.ndarray = field(repr=False)
    phi_e: np.ndarray = field(repr=False)

    COLUMNS = ("xi", "re_m", "im_m", "re_e", "im_e")

    def columns(self) -> dict:
        return dict(zip(self.COLUMNS, (self.grid.xi, self.phi_m.real, self.phi_m.imag,
                                       self.phi_e.real, self.phi_e.imag)))


@dataclass(frozen=True)
class PopulationSeries:
    times: np.ndarray
    w_m: np.ndarray
    w_e: np.ndarray
    method: str

    COLUMNS = ("t", "w_m", "w_e", "method")

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        for name in ("times", "w_m", "w_e"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))

    def channel(self, name: str) -> np.ndarray:
        if name == "m":
            return self.w_m
        if name == "e":
            return self.w_e
        raise ValueError(f"channel must be 'm' or 'e', got {name!r}")


def coefficients(params: ModelParams, xi: float, eps_branch: float = 1e-6) -> BranchCoefficients:
    """Amplitudes of the two quasienergy branches in ``phi_m`` and ``phi_e``.

    Raises
    ------
    BranchDegenerate
        If ``| 2|Omega cos xi| - gamma | <= eps_branch * gamma``; the two-branch
        decomposition is 0/0 there (use :func:`wavefunctions`).
    """
    c = float(cos_xi(xi))
    g = params.gamma
    if abs(2.0 * params.rabi * abs(c) - g) <= eps_branch * g:
        raise BranchDegenerate(f"xi={xi} is within {eps_branch} of a branch point")
    root = np.sqrt(complex(-g * g + 4.0 * params.rabi**2 * c * c))
    q = gamma_pm(params, xi)
    return BranchCoefficients(
        a_m_plus=-2.0 * q.gamma_minus / root,
        a_m_minus=2.0 * q.gamma_plus / root,
        a_e_plus=-np.conj(params.omega) * c / root,
        a_e_minus=np.conj(params.omega) * c / root,
    )


def superposition(params: ModelParams, xi: float, t: float, eps_branch: float = 1e-6):
    """``phi_m, phi_e`` built literally from the two quasienergy branches."""
    co = coefficients(params, xi, eps_branch)
    q = gamma_pm(params, xi)
    ep = np.exp(-1j * q.gamma_plus * t)
    em = np.exp(-1j * q.gamma_minus * t)
    return co.a_m_plus * ep + co.a_m_minus * em, co.a_e_plus * ep + co.a_e_minus * em


def _fields(params, xi, t):
    xi = np.asarray(xi, dtype=float)
    fm, ge = _kernels.adiabatic_fields(np.atleast_1d(cos_xi(xi)).ravel(), float(t),
                                       params.rabi, params.gamma)
    return fm.reshape(xi.shape), ge.reshape(xi.shape)


def wavefunctions(params: ModelParams, xi, t: float):
    """``(phi_m, phi_e)`` at positions ``xi`` and time ``t``.

    Regular at the branch points. ``phi_m`` is real for this initial
    condition; ``phi_e`` carries the phase ``i exp(-i arg Omega)``.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    fm, ge = _fields(params, xi, t)
    phase = 1j * np.exp(-1j * params.rabi_phase)
    phi_m = fm.astype(complex)
    phi_e = phase * ge
    if phi_m.ndim == 0:
        return complex(phi_m), complex(phi_e)
    return phi_m, phi_e


def field_profile(params: ModelParams, grid: SpatialGrid, t: float) -> FieldProfile:
    phi_m, phi_e = wavefunctions(params, grid.xi, t)
    return FieldProfile(grid, float(t), phi_m, phi_e)


def density(params: ModelParams, xi, t: float):
    """Probability densities per unit ``xi``: ``|phi_m|^2/pi``, ``|phi_e|^2/pi``."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    fm, ge = _fields(params, xi, t)
    return fm * fm / math.pi, ge * ge / math.pi


def gaussian_density(params: ModelParams, xi, t: float):
    """Long-time Gaussian approximation of :func:`density` around the node."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    require_decay(params, "Gaussian densities")
    d = np.asarray(xi, dtype=float) - 0.5 * math.pi
    r2 = params.rabi**2
    g = params.gamma
    e = np.exp(-r2 * t / g * d * d)
    return e / math.pi, r2 / (g * g) * d * d * e / math.pi


def total_populations(params: ModelParams, t: float, tol: float = 1e-8, rtol: float = 1e-10):
    """Total level populations over one period, by adaptive quadrature.

    Integrates over ``[0, pi/2]`` and doubles, using the mirror symmetry of
    the densities about the node.

    Raises
    ------
    QuadratureNotConverged
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0:
        return 1.0, 0.0

    def f(x):
        fm, ge = _fields(params, x, t)
        return np.vstack([fm * fm, ge * ge])

    # half-range integral times 2/pi; scale tolerances accordingly
    breaks = _break_hints(params, t)
    val, _ = integrate(f, 0.0, 0.5 * math.pi, atol=tol * math.pi / 2, rtol=rtol,
                       breakpoints=breaks)
    w = val * 2.0 / math.pi
    return float(w[0]), float(w[1])


def _break_hints(params, t):
    # resolve the narrow feature of width ~ k dx next to the node
    pts = [0.25 * math.pi]
    if params.rabi > 0 and params.gamma > 0 and t > 0:
        dx = math.sqrt(params.gamma / t) / params.rabi
        for m in (8.0, 4.0, 2.0, 1.0):
            if m * dx < 0.25 * math.pi:
                pts.append(0.5 * math.pi - m * dx)
    return pts


def gaussian_totals(params: ModelParams, t: float, tol: float = 1e-10):
    """Totals from integrating the Gaussian densities over one period."""
    if t == 0:
        return 1.0, 0.0

    def f(x):
        dm, de = gaussian_density(params, x, t)
        return np.vstack([dm, de])

    val, _ = integrate(f, 0.0, 0.5 * math.pi, atol=tol, rtol=1e-10,
                       breakpoints=_break_hints(params, t))
    return float(2 * val[0]), float(2 * val[1])


def asymptotic_totals(params: ModelParams, t: float):
    """Power-law long-time totals ``(sqrt(gamma)/(|Omega| sqrt(pi t)), ...)``."""
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    require_decay(params, "asymptotic totals")
    g, r = params.gamma, params.rabi
    if r == 0:
        raise ValueError("asymptotic totals need rabi > 0")
    w_m = math.sqrt(g) / (r * math.sqrt(math.pi * t))
    w_e = 1.0 / (2.0 * r * math.sqrt(math.pi * g) * t**1.5)
    return w_m, w_e


def two_level_reference(params: ModelParams, t):
    """Populations of a two-level atom at the antinode (``cos xi = 1``)."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    pm = np.empty_like(t_arr)
    pe = np.empty_like(t_arr)
    one = np.ones(1)
    for i, ti in enumerate(t_arr):
        fm, ge = _kernels.adiabatic_fields(one, float(ti), params.rabi, params.gamma)
        pm[i] = fm[0] ** 2
        pe[i] = ge[0] ** 2
    if np.ndim(t) == 0:
        return float(pm[0]), float(pe[0])
    return pm, pe


def population_series(params: ModelParams, times, method: str = "quadrature",
                      tol: float = 1e-10, workers: int = 1) -> PopulationSeries:
    """Total populations on a time grid by one of the analytic methods.

    ``method`` is one of ``quadrature``, ``mode_sum``, ``asymptotic``,
    ``gaussian`` or ``two_level``. Time points are independent; with
    ``workers > 1`` they are evaluated in a thread pool and the result is
    identical to the sequential one.
    """
    grid = times if isinstance(times, TimeGrid) else TimeGrid(times)
    t = grid.t
    if method == "quadrature":
        fn = lambda ti: total_populations(params, ti, tol=tol)  # noqa: E731
    elif method == "mode_sum":
        from .diffraction import totals_from_sum
        fn = lambda ti: totals_from_sum(params, ti, tail_tol=tol)[:2]  # noqa: E731
    elif method == "asymptotic":
        fn = lambda ti: asymptotic_totals(params, ti)  # noqa: E731
    elif method == "gaussian":
        fn = lambda ti: gaussian_totals(params, ti, tol=tol)  # noqa: E731
    elif method == "two_level":
        pm, pe = two_level_reference(params, t)
        return PopulationSeries(t, pm, pe, method)
    else:
        raise ValueError(f"unsupported method {method!r}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            res = list(pool.map(fn, t))
    else:
        res = [fn(ti) for ti in t]
    res = np.array(res, dtype=float).reshape(-1, 2)
    return PopulationSeries(t, res[:, 0], res[:, 1], method)
