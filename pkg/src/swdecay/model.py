"""Dimensionless model parameters, grids and regime diagnostics.

Units: rates in units of the excited-level width (``gamma = 1`` by
default), times in ``1/gamma`` and positions as ``xi = k x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# pi/2 and 3pi/2 split into a double plus its rounding remainder
_PIO2_HI = 1.5707963267948966
_PIO2_LO = 6.123233995736766e-17
_3PIO2_HI = 4.71238898038469
_3PIO2_LO = 1.8369701987210297e-16


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the atom + standing-wave system.

    Parameters
    ----------
    rabi : float
        Magnitude of the Rabi frequency ``|Omega|``.
    rabi_phase : float
        ``arg(Omega)`` in radians. Only enters the phase of excited-state
        amplitudes.
    gamma : float
        Width of the excited level. Zero gives the unitary limit; quantities
        measured in units of ``gamma`` then raise ``ValueError``.
    recoil : float
        Recoil frequency ``k**2 / 2m``.
    detuning : float
        Doppler detuning ``k p0x / m`` of the mode ladder.
    """

    rabi: float
    gamma: float = 1.0
    recoil: float = 0.0
    detuning: float = 0.0
    rabi_phase: float = 0.0

    def __post_init__(self):
        if not self.rabi >= 0:
            raise ValueError(f"rabi must be >= 0, got {self.rabi}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if not self.recoil >= 0:
            raise ValueError(f"recoil must be >= 0, got {self.recoil}")
        if not math.isfinite(self.detuning) or not math.isfinite(self.rabi_phase):
            raise ValueError("detuning and rabi_phase must be finite")

    @property
    def omega(self) -> complex:
        """Complex Rabi frequency."""
        return self.rabi * complex(math.cos(self.rabi_phase), math.sin(self.rabi_phase))

    def scaled(self, factor: float) -> "ModelParams":
        """All rates multiplied by ``factor``."""
        return ModelParams(self.rabi * factor, self.gamma * factor, self.recoil * factor,
                           self.detuning * factor, self.rabi_phase)


def require_decay(params: ModelParams, what: str):
    if params.gamma == 0:
        raise ValueError(f"{what} need gamma > 0")


def cos_xi(xi):
    """``cos(xi)`` with full relative accuracy near the nodes pi/2 and 3pi/2.

    Plain ``np.cos`` loses relative precision next to a node because the
    rounding error of ``pi/2`` itself dominates the tiny result. The
    quasienergy widths and the long-time densities are quadratic in the
    cosine there, so the reduction matters.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.cos(xi)
    near1 = (xi > 0.25 * math.pi) & (xi < 0.75 * math.pi)
    near3 = (xi > 1.25 * math.pi) & (xi < 1.75 * math.pi)
    out = np.where(near1, np.sin((_PIO2_HI - xi) + _PIO2_LO), out)
    out = np.where(near3, -np.sin((_3PIO2_HI - xi) + _3PIO2_LO), out)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid over one standing-wave period, endpoints 0 and pi included.

    Points are laid out symmetrically about the node so that
    ``xi[j] + xi[-1 - j] == pi`` up to a single rounding.
    """

    xi: np.ndarray = field(repr=False)

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        if xi.ndim != 1 or xi.size < 3:
            raise ValueError("SpatialGrid needs at least 3 points")
        object.__setattr__(self, "xi", xi)

    @classmethod
    def uniform(cls, count: int) -> "SpatialGrid":
        if count < 3:
            raise ValueError(f"grid count must be >= 3, got {count}")
        h = math.pi / (count - 1)
        offsets = (np.arange(count) - 0.5 * (count - 1)) * h
        xi = _PIO2_HI + offsets
        xi[0], xi[-1] = 0.0, math.pi
        return cls(xi)

    @property
    def count(self) -> int:
        return self.xi.size


@dataclass(frozen=True)
class TimeGrid:
    t: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.t, dtype=float))
        if t.ndim != 1 or t.size == 0:
            raise ValueError("TimeGrid needs a 1-D array of times")
        if t[0] < 0 or np.any(np.diff(t) <= 0):
            raise ValueError("times must be >= 0 and strictly increasing")
        object.__setattr__(self, "t", t)

    @classmethod
    def linspace(cls, tmin: float, tmax: float, count: int) -> "TimeGrid":
        return cls(np.linspace(tmin, tmax, count))

    @classmethod
    def geomspace(cls, tmin: float, tmax: float, count: int) -> "TimeGrid":
        return cls(np.geomspace(tmin, tmax, count))

    def __len__(self):
        return self.t.size


@dataclass(frozen=True)
class RegimeReport:
    """Ratios controlling the validity of the long-time asymptotics.

    ``adiabaticity`` is ``None`` when the recoil frequency is zero (the
    criterion cannot be evaluated and the adiabatic model is exact).
    """

    narrow_zone_ratio: float
    adiabaticity_ratio: float | None
    strong_coupling_ratio: float
    transverse_drift_ratio: float
    margin: float
    narrow_zone: bool
    adiabaticity: bool | None
    strong_coupling: bool
    transverse: bool

    @property
    def flags(self) -> dict:
        return {
            "narrow_zone": self.narrow_zone,
            "adiabaticity": self.adiabaticity,
            "strong_coupling": self.strong_coupling,
            "transverse": self.transverse,
        }

    @property
    def all_satisfied(self) -> bool:
        return all(v is not False for v in self.flags.values())


def validate_regime(params: ModelParams, t: float, v0x: float = 0.0,
                    margin: float = 3.0) -> RegimeReport:
    """Evaluate the "much greater than" conditions with a safety ``margin``.

    ``v0x`` is the transverse Doppler rate ``k |v0x|`` in the same units as
    ``gamma``.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if not margin > 1:
        raise ValueError(f"margin must be > 1, got {margin}")
    require_decay(params, "regime ratios")
    rabi, gamma = params.rabi, params.gamma

    narrow = rabi**2 * t / gamma
    strong = rabi / gamma
    # k|v0x| t <= sqrt(gamma/t)/|Omega|  <=>  k|v0x| t |Omega| sqrt(t/gamma) <= 1
    drift = abs(v0x) * t * rabi * math.sqrt(t / gamma)
    if params.recoil > 0:
        adiab = rabi * t / math.sqrt(gamma / params.recoil)
        adiab_ok = adiab <= 1.0 / margin
    else:
        adiab, adiab_ok = None, None

    return RegimeReport(
        narrow_zone_ratio=narrow,
        adiabaticity_ratio=adiab,
        strong_coupling_ratio=strong,
        transverse_drift_ratio=drift,
        margin=margin,
        narrow_zone=narrow >= margin,
        adiabaticity=adiab_ok,
        strong_coupling=strong >= margin,
        transverse=drift <= 1.0 / margin,
    )
