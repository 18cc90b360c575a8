"""Deterministic CSV/JSON writers and readers."""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .dynamics import PopulationSeries


def fmt(v) -> str:
    """17 significant digits for floats, plain text otherwise."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if v == 0.0:
            return "0"  # also folds -0.0
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(v)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def columns_csv(cols: dict) -> str:
    """CSV from a mapping of equally long column arrays."""
    header = list(cols)
    arrays = [np.asarray(c) for c in cols.values()]
    return csv_text(header, zip(*arrays))


def columns_json(cols: dict) -> str:
    data = {k: [_jsonable(v) for v in np.asarray(c).tolist()] for k, c in cols.items()}
    return json.dumps(data, indent=1) + "\n"


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def report_json(obj) -> str:
    return json.dumps(obj, indent=2, default=_default) + "\n"


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"not serialisable: {type(o)}")


def series_rows(series: PopulationSeries):
    for t, wm, we in zip(series.times, series.w_m, series.w_e):
        yield t, wm, we, series.method


def series_csv(series_list) -> str:
    rows = []
    for s in series_list:
        rows.extend(series_rows(s))
    return csv_text(PopulationSeries.COLUMNS, rows)


def read_series_csv(text: str) -> dict:
    """Parse ``t,w_m,w_e,method`` rows into one :class:`PopulationSeries` per method."""
    reader = csv.DictReader(io.StringIO(text))
    missing = set(PopulationSeries.COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"series CSV lacks columns {sorted(missing)}")
    acc: dict = {}
    for row in reader:
        acc.setdefault(row["method"], []).append(
            (float(row["t"]), float(row["w_m"]), float(row["w_e"])))
    out = {}
    for method, vals in acc.items():
        arr = np.array(vals)
        out[method] = PopulationSeries(arr[:, 0], arr[:, 1], arr[:, 2], method)
    return out
