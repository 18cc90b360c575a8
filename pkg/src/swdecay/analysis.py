"""Power-law tails, oscillation metrics and suppression of Rabi oscillations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import PopulationSeries
from .errors import InsufficientData, NonPositiveValues, TooFewPeaks
from .model import ModelParams

PEAK_PROMINENCE = 1e-6


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float
    rms_residual: float
    window: tuple

    def __call__(self, t):
        return self.prefactor * np.asarray(t, dtype=float) ** self.exponent


@dataclass(frozen=True)
class OscillationMetrics:
    peak_times: np.ndarray
    peak_values: np.ndarray
    mean_period: float
    modulation_depth: float


def _series_arrays(series, channel):
    if isinstance(series, PopulationSeries):
        return series.times, series.channel(channel)
    t, w = series
    return np.asarray(t, dtype=float), np.asarray(w, dtype=float)


def _in_window(t, window):
    if window is None:
        return np.ones(t.size, dtype=bool)
    lo, hi = window
    return (t >= lo) & (t <= hi)


def fit_power_law(series, window=None, channel: str = "m") -> PowerLawFit:
    """Least-squares fit of ``log w = log A + p log t`` inside ``window``.

    ``series`` is a :class:`PopulationSeries` (``channel`` picks ``w_m`` or
    ``w_e``) or a ``(t, w)`` pair.

    Raises
    ------
    InsufficientData
        Fewer than 8 points in the window.
    NonPositiveValues
        A time or population in the window is not strictly positive.
    """
    t, w = _series_arrays(series, channel)
    sel = _in_window(t, window)
    t, w = t[sel], w[sel]
    if t.size < 8:
        raise InsufficientData(f"need >= 8 points in window, got {t.size}")
    if np.any(w <= 0) or np.any(t <= 0):
        raise NonPositiveValues("power-law fit needs positive times and values")
    x, y = np.log(t), np.log(w)
    design = np.vstack([x, np.ones_like(x)]).T
    (p, c), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (p * x + c)
    rms = float(np.sqrt(np.mean(resid**2)))
    win = tuple(window) if window is not None else (float(t[0]), float(t[-1]))
    return PowerLawFit(float(p), float(np.exp(c)), rms, win)


def default_fit_window(params: ModelParams, tmax: float, ratio: float = 10.0):
    """Window starting where the narrow-zone ratio ``|Omega|^2 t/gamma`` reaches ``ratio``."""
    if params.gamma == 0 or params.rabi == 0:
        raise ValueError("fit window needs gamma > 0 and rabi > 0")
    return ratio * params.gamma / params.rabi**2, tmax


def _peaks(t, w):
    """Local maxima refined by a parabola through three samples."""
    i = np.arange(1, w.size - 1)
    cand = i[(w[i] > w[i - 1]) & (w[i] >= w[i + 1])]
    times, vals = [], []
    for j in cand:
        left = w[:j + 1][::-1]
        right = w[j:]
        # prominence against the lowest point reached before climbing higher
        lo_l = np.minimum.accumulate(left)[np.argmax(left > w[j])] if np.any(left > w[j]) else left.min()
        lo_r = np.minimum.accumulate(right)[np.argmax(right > w[j])] if np.any(right > w[j]) else right.min()
        if w[j] - max(lo_l, lo_r) < PEAK_PROMINENCE:
            continue
        y0, y1, y2 = w[j - 1], w[j], w[j + 1]
        h0, h1 = t[j] - t[j - 1], t[j + 1] - t[j]
        # vertex of the interpolating parabola on a possibly non-uniform stencil
        d1 = (y1 - y0) / h0
        d2 = (y2 - y1) / h1
        curv = (d2 - d1) / (h0 + h1)
        if curv >= 0:
            times.append(t[j])
            vals.append(y1)
            continue
        slope_mid = d1 + curv * h0       # derivative at t[j]
        dt = -slope_mid / (2 * curv)
        times.append(t[j] + dt)
        vals.append(y1 + slope_mid * dt + curv * dt * dt)
    return np.array(times), np.array(vals)


def oscillation_metrics(series, window=None, channel: str = "m") -> OscillationMetrics:
    """Peak positions, mean peak spacing and modulation depth inside ``window``.

    The modulation depth is ``(max - min) / (max + min)`` of the sampled
    values in the window.

    Raises
    ------
    TooFewPeaks
        Fewer than three maxima with prominence above ``PEAK_PROMINENCE``.
    """
    t, w = _series_arrays(series, channel)
    sel = _in_window(t, window)
    t, w = t[sel], w[sel]
    depth = modulation_depth(w)
    pt, pv = _peaks(t, w)
    if pt.size < 3:
        raise TooFewPeaks(f"found {pt.size} peaks, need >= 3")
    return OscillationMetrics(pt, pv, float(np.mean(np.diff(pt))), depth)


def modulation_depth(w) -> float:
    w = np.asarray(w, dtype=float)
    hi, lo = w.max(), w.min()
    if hi + lo == 0:
        return 0.0
    return float((hi - lo) / (hi + lo))


def suppression_ratio(series, reference, window=None, channel: str = "m") -> float:
    """Modulation depth of ``series`` relative to ``reference`` on a common grid."""
    t1, w1 = _series_arrays(series, channel)
    t2, w2 = _series_arrays(reference, channel)
    if t1.shape != t2.shape or not np.allclose(t1, t2, rtol=0, atol=1e-12):
        raise ValueError("series and reference must share a time grid")
    sel = _in_window(t1, window)
    if not np.any(sel):
        raise InsufficientData("empty window")
    ref = modulation_depth(w2[sel])
    if ref == 0:
        raise ValueError("reference has no modulation in the window")
    return modulation_depth(w1[sel]) / ref
