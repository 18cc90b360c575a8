"""Command-line front end.

Every command writes data only (CSV or JSON) so that identical inputs give
byte-identical files. Settings are layered: built-in defaults, then a
``--preset``, then a ``--config`` file, then explicit flags.

Exit codes: 0 success, 2 usage error, 3 convergence failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import analysis, diffraction, dynamics, io, ladder, quasienergy
from .errors import ConvergenceError
from .model import ModelParams, SpatialGrid, TimeGrid, validate_regime

EXIT_USAGE, EXIT_CONVERGENCE, EXIT_IO = 2, 3, 4

COMMANDS = ("zones", "density", "totals", "diffraction", "ladder", "fit")


class UsageError(Exception):
    pass


@dataclass
class ScenarioConfig:
    rabi: float = 5.0
    rabi_phase: float = 0.0
    gamma: float = 1.0
    recoil: float = 0.0
    detuning: float = 0.0
    t: float = 2.0
    tmin: float = 0.0
    tmax: float = 6.0
    nt: int = 121
    nx: int = 181
    orders: int = 8
    tol: float = 1e-10
    v0x: float = 0.0
    margin: float = 3.0
    window_min: float | None = None
    window_max: float | None = None
    methods: str = "quadrature"
    deviation: bool = False
    split: bool = False
    input: str | None = None
    trajectory: str | None = None
    out: str | None = None
    format: str = "csv"

    def params(self) -> ModelParams:
        return ModelParams(self.rabi, self.gamma, self.recoil, self.detuning, self.rabi_phase)

    def times(self) -> TimeGrid:
        return TimeGrid.linspace(self.tmin, self.tmax, self.nt)

    def window(self):
        if self.window_min is None and self.window_max is None:
            return None
        lo = self.window_min if self.window_min is not None else self.tmin
        hi = self.window_max if self.window_max is not None else self.tmax
        return lo, hi

    def validate(self):
        if self.nx < 3:
            raise UsageError("nx must be >= 3 (empty spatial grid)")
        if self.nt < 1:
            raise UsageError("nt must be >= 1")
        if self.tmax < self.tmin or self.tmin < 0:
            raise UsageError("need 0 <= tmin <= tmax")
        if self.nt > 1 and self.tmax == self.tmin:
            raise UsageError("tmax must exceed tmin when nt > 1")
        if self.orders < 1:
            raise UsageError("orders must be >= 1")
        if self.format not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        if not self.tol > 0:
            raise UsageError("tol must be > 0")
        if not self.margin > 1:
            raise UsageError("margin must be > 1")
        for m in self.method_list():
            if m not in ("quadrature", "mode_sum", "asymptotic", "gaussian", "two_level"):
                raise UsageError(f"unknown method {m!r}")
        try:
            self.params()
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def method_list(self):
        return [m.strip() for m in self.methods.split(",") if m.strip()]


_FIELD_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}

PRESETS = {
    "fig2a": {"rabi": 1.0 / (2.0 * math.sqrt(2.0)), "nx": 181},
    "fig2b": {"rabi": math.sqrt(2.0), "nx": 181},
    "fig3": {"rabi": 3.0, "t": 2.0, "nx": 361},
    "fig4": {"rabi": 5.0, "tmin": 0.0, "tmax": 6.0, "nt": 121, "orders": 9, "split": True},
    "fig5": {"rabi": 5.0, "tmin": 0.0, "tmax": 6.0, "nt": 241,
             "methods": "quadrature,mode_sum,asymptotic,two_level"},
}


def _convert(name, raw):
    typ = _FIELD_TYPES[name]
    text = raw.strip()
    if "None" in typ and text in ("", "none", "None"):
        return None
    if typ.startswith("bool"):
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"{name}: expected a boolean, got {raw!r}")
    try:
        if typ.startswith("int"):
            return int(text)
        if typ.startswith("float"):
            return float(text)
    except ValueError:
        raise UsageError(f"{name}: cannot parse {raw!r}") from None
    return text


def emit_config(cfg: ScenarioConfig) -> str:
    """Flat ``key=value`` text; floats use ``repr`` so parsing is lossless."""
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            s = "none"
        elif isinstance(v, bool):
            s = "true" if v else "false"
        else:
            s = repr(v) if isinstance(v, float) else str(v)
        lines.append(f"{f.name}={s}")
    return "\n".join(lines) + "\n"


def parse_config(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Parse ``key=value`` lines (``#`` comments allowed); unknown keys are rejected."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key=value")
        key, raw = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if key not in _FIELD_TYPES:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw)
    return dataclasses.replace(base or ScenarioConfig(), **values)


# ---------------------------------------------------------------- commands

def cmd_zones(cfg: ScenarioConfig):
    table = quasienergy.zone_table(cfg.params(), SpatialGrid.uniform(cfg.nx))
    return table.columns()


def cmd_density(cfg: ScenarioConfig):
    p = cfg.params()
    grid = SpatialGrid.uniform(cfg.nx)
    prof = dynamics.field_profile(p, grid, cfg.t)
    cols = prof.columns()
    dm, de = dynamics.density(p, grid.xi, cfg.t)
    gm, ge = dynamics.gaussian_density(p, grid.xi, cfg.t)
    cols.update({
        "abs2_m": np.abs(prof.phi_m) ** 2, "abs2_e": np.abs(prof.phi_e) ** 2,
        "dens_m": dm, "dens_e": de, "gauss_m": gm, "gauss_e": ge,
    })
    return cols


def cmd_totals(cfg: ScenarioConfig):
    p = cfg.params()
    grid = cfg.times()
    out = []
    for method in cfg.method_list():
        t = grid.t
        if method == "asymptotic":
            t = t[t > 0]
            if t.size == 0:
                continue
        out.append(dynamics.population_series(p, t, method, tol=cfg.tol))
    return out


def _diffraction_rows(cfg: ScenarioConfig):
    p = cfg.params()
    nmax = cfg.orders
    kmax = nmax // 2 + 1
    rows = []
    for t in cfg.times().t:
        spectrum = diffraction.amplitudes(p, t, nmax, tol=cfg.tol)
        wm, we = diffraction.partials(p, t, kmax, tol=min(cfg.tol, 1e-12))
        for tt, n, ch, re, im, w in spectrum.rows():
            k = abs(n)
            if ch == "m":
                closed = wm[k // 2] if k % 2 == 0 else 0.0
            else:
                closed = we[(k - 1) // 2] if k % 2 == 1 else 0.0
            rows.append((tt, n, ch, re, im, w, closed))
    return rows


DIFFRACTION_HEADER = ("t", "n", "channel", "re_a", "im_a", "w", "w_closed")


def cmd_diffraction(cfg: ScenarioConfig):
    return _diffraction_rows(cfg)


def cmd_ladder(cfg: ScenarioConfig):
    p = cfg.params()
    grid = cfg.times()
    tol = min(cfg.tol, 1e-9)
    if cfg.deviation:
        probe = ladder.adiabaticity_probe(p, grid, rtol=tol)
        res = probe.full
    else:
        probe = None
        res = ladder.integrate(p, times=grid, rtol=tol)
    cols = {
        "t": res.series.times, "w_m": res.series.w_m, "w_e": res.series.w_e,
        "boundary_norm": res.boundary_norm, "asymmetry": res.asymmetry(),
    }
    if probe is not None:
        cols["d_m"] = probe.d_m
        cols["d_e"] = probe.d_e
    return cols, res


def _trajectory_rows(res):
    for i, t in enumerate(res.series.times):
        for ch, amps in (("m", res.amps_m), ("e", res.amps_e)):
            for n, a in zip(res.orders, amps[i]):
                yield t, int(n), ch, a.real, a.imag


def cmd_fit(cfg: ScenarioConfig):
    p = cfg.params()
    if cfg.input:
        try:
            text = Path(cfg.input).read_text()
        except OSError as exc:
            raise OSError(f"{cfg.input}: {exc.strerror or exc}") from exc
        try:
            series_by_method = io.read_series_csv(text)
        except (ValueError, KeyError) as exc:
            raise UsageError(f"{cfg.input}: {exc}") from None
        main = series_by_method.get("quadrature") or series_by_method.get("mode_sum") \
            or next(iter(series_by_method.values()))
        reference = series_by_method.get("two_level")
    else:
        main, reference = None, None

    window = cfg.window() or analysis.default_fit_window(p, cfg.tmax)
    if main is None:
        t = np.linspace(window[0], window[1], max(cfg.nt, 8))
        fit_series = dynamics.population_series(p, t, "quadrature", tol=cfg.tol)
    else:
        fit_series = main
    expected = {}
    if p.rabi > 0:
        expected = {"m": (-0.5, math.sqrt(p.gamma) / (p.rabi * math.sqrt(math.pi))),
                    "e": (-1.5, 1.0 / (2.0 * p.rabi * math.sqrt(math.pi * p.gamma)))}
    fits = []
    for ch in ("m", "e"):
        f = analysis.fit_power_law(fit_series, window, ch)
        exp_p, exp_a = expected.get(ch, (None, None))
        fits.append({
            "channel": ch, "exponent": f.exponent, "prefactor": f.prefactor,
            "residual": f.rms_residual, "window": list(f.window),
            "expected_exponent": exp_p, "expected_prefactor": exp_a,
        })

    windows = [(1.0, 3.0), (3.0, 5.0), (5.0, 7.0)]
    if main is None:
        t = np.linspace(0.0, windows[-1][1], 1401)
        sup_series = dynamics.population_series(p, t, "quadrature", tol=cfg.tol)
        reference = dynamics.population_series(p, t, "two_level")
    else:
        sup_series = main
    suppression = None
    if reference is not None:
        ratios = []
        for w in windows:
            try:
                ratios.append(analysis.suppression_ratio(sup_series, reference, w))
            except (ValueError, analysis.InsufficientData):
                ratios.append(None)
        suppression = {"windows": [list(w) for w in windows], "ratio_m": ratios}
    report = validate_regime(p, window[0], cfg.v0x, cfg.margin)
    regime = {"t": window[0], "margin": cfg.margin,
              "ratios": {"narrow_zone": report.narrow_zone_ratio,
                         "adiabaticity": report.adiabaticity_ratio,
                         "strong_coupling": report.strong_coupling_ratio,
                         "transverse": report.transverse_drift_ratio},
              "flags": report.flags}
    return {"fits": fits, "suppression": suppression, "regime": regime}


# ---------------------------------------------------------------- plumbing

def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise OSError(f"{out}: {exc.strerror or exc}") from exc


def _split_path(out: str, n: int) -> str:
    p = Path(out)
    return str(p.with_name(f"{p.stem}_n{n}{p.suffix or '.csv'}"))


def run(command: str, cfg: ScenarioConfig):
    """Execute ``command`` and write its output(s)."""
    cfg.validate()
    as_json = cfg.format == "json"
    if command == "zones":
        cols = cmd_zones(cfg)
        _write(io.columns_json(cols) if as_json else io.columns_csv(cols), cfg.out)
    elif command == "density":
        cols = cmd_density(cfg)
        _write(io.columns_json(cols) if as_json else io.columns_csv(cols), cfg.out)
    elif command == "totals":
        series = cmd_totals(cfg)
        if as_json:
            _write(io.report_json([{"method": s.method, "t": s.times, "w_m": s.w_m,
                                    "w_e": s.w_e} for s in series]), cfg.out)
        else:
            _write(io.series_csv(series), cfg.out)
    elif command == "diffraction":
        rows = cmd_diffraction(cfg)
        if cfg.split:
            if cfg.out is None:
                raise UsageError("--split needs --out")
            for n in range(cfg.orders + 1):
                sel = [r for r in rows if abs(r[1]) == n]
                _write(io.csv_text(DIFFRACTION_HEADER, sel), _split_path(cfg.out, n))
        cols = {h: [r[i] for r in rows] for i, h in enumerate(DIFFRACTION_HEADER)}
        _write(io.columns_json(cols) if as_json else io.csv_text(DIFFRACTION_HEADER, rows),
               cfg.out)
    elif command == "ladder":
        cols, res = cmd_ladder(cfg)
        _write(io.columns_json(cols) if as_json else io.columns_csv(cols), cfg.out)
        if cfg.trajectory:
            _write(io.csv_text(("t", "n", "channel", "re", "im"), _trajectory_rows(res)),
                   cfg.trajectory)
    elif command == "fit":
        _write(io.report_json(cmd_fit(cfg)), cfg.out)
    else:
        raise UsageError(f"unknown command {command!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="swdecay", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--preset", choices=sorted(PRESETS))
    ap.add_argument("--config", help="flat key=value file")
    flag = {
        "rabi": float, "rabi_phase": float, "gamma": float, "recoil": float,
        "detuning": float, "t": float, "tmin": float, "tmax": float, "nt": int,
        "nx": int, "orders": int, "tol": float, "v0x": float, "margin": float,
        "window_min": float, "window_max": float, "methods": str, "input": str,
        "trajectory": str, "out": str,
    }
    for name, typ in flag.items():
        ap.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=None)
    ap.add_argument("--format", choices=("csv", "json"), default=None)
    ap.add_argument("--deviation", action="store_true", default=None,
                    help="ladder: add deviation from the zero-recoil run")
    ap.add_argument("--split", action="store_true", default=None,
                    help="diffraction: also write one file per order")
    ap.add_argument("--dump-config", action="store_true",
                    help="print the resolved configuration and exit")
    return ap


def resolve_config(ns: argparse.Namespace) -> ScenarioConfig:
    cfg = ScenarioConfig()
    if ns.preset:
        cfg = dataclasses.replace(cfg, **PRESETS[ns.preset])
    if ns.config:
        try:
            text = Path(ns.config).read_text()
        except OSError as exc:
            raise OSError(f"{ns.config}: {exc.strerror or exc}") from exc
        cfg = parse_config(text, cfg)
    explicit = {f.name: getattr(ns, f.name) for f in fields(cfg)
                if getattr(ns, f.name, None) is not None}
    return dataclasses.replace(cfg, **explicit)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(ns)
        if ns.dump_config:
            _write(emit_config(cfg), None)
            return 0
        run(ns.command, cfg)
    except UsageError as exc:
        print(f"swdecay: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"swdecay: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"swdecay: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
