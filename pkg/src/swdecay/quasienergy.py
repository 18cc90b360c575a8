"""Position-dependent complex quasienergies of the adiabatic Hamiltonian."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, SpatialGrid, cos_xi, require_decay


@dataclass(frozen=True)
class QuasienergyPair:
    gamma_plus: np.ndarray | complex
    gamma_minus: np.ndarray | complex


def _root_parts(params, xi):
    """Return ``(re, im, oc2)`` of ``sqrt(|Omega c|^2 - gamma^2/4)`` (principal)."""
    c = cos_xi(xi)
    oc = params.rabi * np.abs(c)
    half = 0.5 * params.gamma
    d = (oc - half) * (oc + half)
    re = np.sqrt(np.maximum(d, 0.0))
    im = np.sqrt(np.maximum(-d, 0.0))
    return re, im, oc * oc


def gamma_pm(params: ModelParams, xi) -> QuasienergyPair:
    """Quasienergies ``-i gamma/4 +/- sqrt(|Omega cos xi|^2 - gamma^2/4) / 2``.

    The ``+`` branch is the slowly decaying one. Below the branch point the
    narrow width is evaluated as ``|Omega c|^2 / (gamma/2 + r)`` to avoid the
    cancellation in ``gamma/2 - r``.
    """
    g = params.gamma
    re, im, oc2 = _root_parts(params, xi)
    # widths: Gamma_+ = g/2 - im, Gamma_- = g/2 + im
    w_minus = 0.5 * g + im
    w_plus = np.where(im > 0, oc2 / np.where(im > 0, w_minus, 1.0), 0.5 * g)
    gp = 0.5 * re - 0.5j * w_plus
    gm = -0.5 * re - 0.5j * w_minus
    if np.ndim(gp) == 0:
        return QuasienergyPair(complex(gp), complex(gm))
    return QuasienergyPair(gp, gm)


def widths(params: ModelParams, xi):
    """Zone widths ``(Gamma_+, Gamma_-)`` with ``Gamma_+ + Gamma_- = gamma``."""
    q = gamma_pm(params, xi)
    return -2.0 * np.imag(q.gamma_plus), -2.0 * np.imag(q.gamma_minus)


def cy_potential(params: ModelParams, xi):
    """Weak-coupling complex potential ``-i |Omega|^2 cos^2(xi) / (2 gamma)``."""
    require_decay(params, "weak-coupling potential")
    c = cos_xi(xi)
    return -0.5j * params.rabi**2 * c * c / params.gamma


def width_parabolic(params: ModelParams, xi):
    """Narrow width expanded about the node: ``(|Omega|^2/gamma)(xi - pi/2)^2``."""
    require_decay(params, "parabolic width")
    d = np.asarray(xi, dtype=float) - 0.5 * math.pi
    return params.rabi**2 / params.gamma * d * d


def omega_eff(params: ModelParams, xi):
    """Local Rabi frequency ``|Omega cos xi|``."""
    return params.rabi * np.abs(cos_xi(xi))


def delta_x(params: ModelParams, t: float) -> float:
    """Dimensionless width ``k dx = sqrt(gamma/t)/|Omega|`` of the slowly decaying region."""
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    require_decay(params, "zone width")
    if params.rabi == 0:
        return math.inf
    return math.sqrt(params.gamma / t) / params.rabi


def branch_points(params: ModelParams) -> np.ndarray:
    """Positions in ``[0, pi]`` where ``2|Omega cos xi| = gamma``."""
    if params.rabi == 0:
        return np.empty(0)
    r = params.gamma / (2.0 * params.rabi)
    if r > 1:
        return np.empty(0)
    x0 = math.acos(r)
    return np.unique(np.array([x0, math.pi - x0]))


@dataclass(frozen=True)
class ZoneTable:
    xi: np.ndarray
    gamma_plus: np.ndarray
    gamma_minus: np.ndarray

    @property
    def width_plus(self):
        return -2.0 * self.gamma_plus.imag

    @property
    def width_minus(self):
        return -2.0 * self.gamma_minus.imag

    @property
    def upper_plus(self):
        return self.gamma_plus.real + 0.5 * self.width_plus

    @property
    def lower_plus(self):
        return self.gamma_plus.real - 0.5 * self.width_plus

    @property
    def upper_minus(self):
        return self.gamma_minus.real + 0.5 * self.width_minus

    @property
    def lower_minus(self):
        return self.gamma_minus.real - 0.5 * self.width_minus

    COLUMNS = ("xi", "re_gp", "im_gp", "re_gm", "im_gm", "width_p", "width_m",
               "upper_p", "lower_p", "upper_m", "lower_m")

    def columns(self) -> dict:
        return dict(zip(self.COLUMNS, (
            self.xi, self.gamma_plus.real, self.gamma_plus.imag,
            self.gamma_minus.real, self.gamma_minus.imag, self.width_plus,
            self.width_minus, self.upper_plus, self.lower_plus,
            self.upper_minus, self.lower_minus)))


def zone_table(params: ModelParams, grid: SpatialGrid) -> ZoneTable:
    """Quasienergies and zone boundaries ``Re(gamma) +/- width/2`` on a grid."""
    q = gamma_pm(params, grid.xi)
    return ZoneTable(grid.xi, np.asarray(q.gamma_plus), np.asarray(q.gamma_minus))
