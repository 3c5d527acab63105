"""CSV and manifest output.

Formatting contract: floats are written with repr-faithful precision
(``%.17g``), NaN becomes an empty field, booleans become 1/0, and rows follow
the fixed column orders below.  Writers emit ``\n`` line endings regardless
of platform, so identical results give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .experiments import ReplicateResult

__all__ = [
    "SWEEP_COLUMNS",
    "TIMESERIES_COLUMNS",
    "REGIONS_COLUMNS",
    "fmt_float",
    "write_sweep_csv",
    "write_timeseries_csv",
    "write_regions_csv",
    "write_manifest",
]

SWEEP_COLUMNS = (
    "network_type", "network_seed", "instance_index", "replicate_index",
    "Z", "m_or_L", "beta", "c", "b", "B", "W", "s", "p_fo", "p_r",
    "normalized", "update_rule", "zealot_fraction", "zealot_order",
    "interference", "generations", "window",
    "au_freq_all", "au_freq_nonzealot", "au_low", "au_med", "au_high",
)

TIMESERIES_COLUMNS = ("generation", "au_all", "au_low", "au_med", "au_high")

REGIONS_COLUMNS = ("regime", "s", "p_fo", "b", "c", "p_r",
                   "early_lo", "early_hi", "late_welfare", "late_riskdom",
                   "region")


def fmt_float(x: float) -> str:
    """17 significant digits (value-exact round trip); NaN -> empty field."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{x:.17g}"


def _sweep_row(r: ReplicateResult) -> list[str]:
    p = r.params
    return [
        r.network.generator,
        str(r.network.seed),
        str(r.instance_index),
        str(r.replicate_index),
        str(r.n_nodes),
        str(r.network.m),
        fmt_float(r.cfg.beta),
        fmt_float(p.c), fmt_float(p.b), fmt_float(p.B), fmt_float(p.W),
        fmt_float(p.s), fmt_float(p.p_fo), fmt_float(p.p_r),
        "1" if r.cfg.normalized else "0",
        r.cfg.update_rule.value,
        fmt_float(r.zealot_fraction),
        r.zealot_order.value,
        r.interference.value,
        str(r.generations),
        str(r.window),
        fmt_float(r.au_freq_all),
        fmt_float(r.au_freq_nonzealot),
        fmt_float(r.au_freq_by_class[0]),
        fmt_float(r.au_freq_by_class[1]),
        fmt_float(r.au_freq_by_class[2]),
    ]


def _open_writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_sweep_csv(records: list[ReplicateResult], path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        w = _open_writer(fh)
        w.writerow(SWEEP_COLUMNS)
        for r in records:
            w.writerow(_sweep_row(r))


def write_timeseries_csv(ts: np.ndarray, path) -> None:
    """``ts`` rows are (generation, au_all, au_low, au_med, au_high)."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        w = _open_writer(fh)
        w.writerow(TIMESERIES_COLUMNS)
        for row in ts:
            w.writerow([str(int(row[0]))] + [fmt_float(x) for x in row[1:]])


def write_regions_csv(rows: list[dict], fh) -> None:
    """``rows`` are dicts keyed by REGIONS_COLUMNS; missing/None -> empty."""
    w = _open_writer(fh)
    w.writerow(REGIONS_COLUMNS)
    for row in rows:
        out = []
        for col in REGIONS_COLUMNS:
            v = row.get(col)
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(fmt_float(v))
            else:
                out.append(str(v))
        w.writerow(out)


def write_manifest(payload: dict, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
