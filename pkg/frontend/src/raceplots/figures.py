"""Render the four figure families from simulator CSV files.

Every renderer writes two artifacts: the image named by ``spec.out`` and a
sidecar CSV of the plotted coordinates next to it (same stem, extension
``.coords.csv``).  Image bytes may vary across matplotlib versions; the
sidecar is the regression surface and is byte-identical for identical
inputs.  Sidecar rows always carry the columns (series, x, y, value,
stderr); families leave fields they do not use empty.

Renderers never simulate and never modify their inputs; boundary overlays
are read from a regions CSV rather than recomputed, so the closed-form
layer stays the single source of the formulas.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import (PlotDataError, fmt_float, parse_float, read_table,
                 require_columns, write_sidecar)

FAMILIES = ("heatmap", "scan", "zealots", "timeseries")
BOUNDARY_COLUMNS = ("early_lo", "early_hi", "late_welfare", "late_riskdom")
SIDECAR_COLUMNS = ("series", "x", "y", "value", "stderr")
TIMESERIES_CLASS_COLUMNS = ("au_low", "au_med", "au_high")


@dataclass(frozen=True)
class FigureSpec:
    """One figure: family, inputs, axis variables, overlay, output path."""

    family: str
    inputs: tuple[str, ...]
    out: str
    x: str = ""
    y: str = ""
    value_column: str = "au_freq_all"
    regions: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise PlotDataError(f"unknown figure family {self.family!r}")
        if not self.inputs:
            raise PlotDataError("at least one input CSV is required")


def sidecar_path(out) -> Path:
    return Path(out).with_suffix(".coords.csv")


def _group_stats(rows, key_columns, value_column, path):
    """Mean/stderr/count of the value column per key tuple, NaN excluded."""
    groups: dict[tuple, list[float]] = {}
    for r in rows:
        key = tuple(parse_float(r[c], path) for c in key_columns)
        groups.setdefault(key, []).append(parse_float(r[value_column], path))
    stats = {}
    for key, values in groups.items():
        clean = [v for v in values if not math.isnan(v)]
        if not clean:
            stats[key] = (math.nan, math.nan, 0)
        elif len(clean) == 1:
            stats[key] = (clean[0], 0.0, 1)
        else:
            mean = float(np.mean(clean))
            stderr = float(np.std(clean, ddof=1) / math.sqrt(len(clean)))
            stats[key] = (mean, stderr, len(clean))
    return stats


def _edges(centers):
    # cell boundaries halfway between neighbouring centers
    c = np.asarray(centers, dtype=float)
    if len(c) == 1:
        return np.array([c[0] - 0.5, c[0] + 0.5])
    mids = (c[:-1] + c[1:]) / 2
    return np.concatenate([[2 * c[0] - mids[0]], mids, [2 * c[-1] - mids[-1]]])


def _read_overlays(path, x_column):
    """Boundary curves from a regions CSV: (name, [(x, y), ...]) per column."""
    header, rows = read_table(path)
    require_columns(header, (x_column,), path)
    curves = []
    for name in BOUNDARY_COLUMNS:
        if name not in header:
            continue
        points = {}
        for r in rows:
            if r[x_column] == "" or r[name] == "":
                continue
            points[parse_float(r[x_column], path)] = parse_float(r[name], path)
        if points:
            curves.append((name, sorted(points.items())))
    return curves


def _read_markers(path):
    """Distinct boundary values from a regions CSV, for vertical markers."""
    header, rows = read_table(path)
    markers = []
    for name in BOUNDARY_COLUMNS:
        if name not in header:
            continue
        values = sorted({parse_float(r[name], path)
                         for r in rows if r[name] != ""})
        markers.extend((name, v) for v in values)
    return markers


def _save(fig, spec, rows):
    fig.tight_layout()
    fig.savefig(spec.out, dpi=120)
    plt.close(fig)
    side = sidecar_path(spec.out)
    write_sidecar(side, SIDECAR_COLUMNS, rows)
    return side


def render_heatmap(spec: FigureSpec) -> dict:
    """Grid heatmap of the mean value over (x, y) cells, color scale [0, 1]."""
    path = spec.inputs[0]
    header, rows = read_table(path)
    require_columns(header, (spec.x, spec.y, spec.value_column), path)
    cells = _group_stats(rows, (spec.x, spec.y), spec.value_column, path)
    xs = sorted({k[0] for k in cells})
    ys = sorted({k[1] for k in cells})
    grid = np.full((len(ys), len(xs)), np.nan)
    for (x, y), (mean, _, _) in cells.items():
        grid[ys.index(y), xs.index(x)] = mean
    curves = _read_overlays(spec.regions, spec.x) if spec.regions else []

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    mesh = ax.pcolormesh(_edges(xs), _edges(ys), np.ma.masked_invalid(grid),
                         vmin=0.0, vmax=1.0, cmap="viridis", shading="flat")
    fig.colorbar(mesh, ax=ax, label=spec.value_column)
    for name, points in curves:
        ax.plot([p[0] for p in points], [p[1] for p in points],
                ls="--", lw=1.6, color="white", label=name)
    ax.set_xlabel(spec.x)
    ax.set_ylabel(spec.y)
    if curves:
        ax.legend(loc="best", fontsize=8)

    side_rows = [("cell", fmt_float(x), fmt_float(y), fmt_float(mean), "")
                 for (x, y), (mean, _, _) in sorted(cells.items())]
    for name, points in curves:
        side_rows.extend((f"boundary_{name}", fmt_float(x), fmt_float(y), "", "")
                         for x, y in points)
    side = _save(fig, spec, side_rows)
    return {"command": "plot-heatmap", "out": spec.out, "sidecar": str(side),
            "cells": len(cells), "overlays": len(curves)}


def _line_series(spec: FigureSpec, x_column, label_of):
    """One (label, sorted points) series per input file."""
    series = []
    seen: dict[str, int] = {}
    for path in spec.inputs:
        header, rows = read_table(path)
        require_columns(header, (x_column, spec.value_column), path)
        label = label_of(header, rows, path)
        seen[label] = seen.get(label, 0) + 1
        if seen[label] > 1:
            label = f"{label}#{seen[label]}"
        stats = _group_stats(rows, (x_column,), spec.value_column, path)
        points = sorted((k[0], m, se, n) for k, (m, se, n) in stats.items())
        series.append((label, points))
    return series


def _network_label(header, rows, path):
    if "network_type" in header and rows:
        return rows[0]["network_type"]
    return Path(path).stem


def _zealot_label(header, rows, path):
    if "zealot_order" in header and rows:
        label = rows[0]["zealot_order"]
        mode = rows[0].get("interference", "none")
        return label if mode == "none" else f"{label}+{mode}"
    return Path(path).stem


def _render_lines(spec, x_column, label_of, command, markers=()):
    series = _line_series(spec, x_column, label_of)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, points in series:
        xs = [p[0] for p in points]
        means = [p[1] for p in points]
        ax.plot(xs, means, marker="o", ms=4, label=label)
        if any(p[2] > 0 for p in points):
            ax.fill_between(xs, [m - se for _, m, se, _ in points],
                            [m + se for _, m, se, _ in points], alpha=0.2)
    for _, value in markers:
        ax.axvline(value, ls=":", lw=1.2, color="0.4")
    ax.set_xlabel(x_column)
    ax.set_ylabel(spec.value_column)
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="best", fontsize=8)

    side_rows = []
    for label, points in series:
        side_rows.extend((label, fmt_float(x), "", fmt_float(m), fmt_float(se))
                         for x, m, se, _ in points)
    side_rows.extend((f"boundary_{name}", fmt_float(v), "", "", "")
                     for name, v in markers)
    side = _save(fig, spec, side_rows)
    return {"command": command, "out": spec.out, "sidecar": str(side),
            "series": len(series),
            "points": sum(len(p) for _, p in series)}


def render_risk_scan(spec: FigureSpec) -> dict:
    """Mean value vs the x variable, one line per input file."""
    markers = _read_markers(spec.regions) if spec.regions else ()
    return _render_lines(spec, spec.x or "p_r", _network_label,
                         "plot-scan", markers)


def render_zealot_curve(spec: FigureSpec) -> dict:
    """Mean value vs zealot fraction, one line per input file."""
    return _render_lines(spec, "zealot_fraction", _zealot_label,
                         "plot-zealots")


def render_timeseries(spec: FigureSpec) -> dict:
    """Frequency vs generation; one line per degree class, empty ones omitted."""
    path = spec.inputs[0]
    header, rows = read_table(path)
    require_columns(header, ("generation", spec.value_column), path)
    columns = [spec.value_column]
    columns += [c for c in TIMESERIES_CLASS_COLUMNS
                if c in header and c != spec.value_column]
    series = []
    for col in columns:
        points = [(parse_float(r["generation"], path), parse_float(r[col], path))
                  for r in rows if r[col] != ""]
        if points:
            series.append((col, points))

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, points in series:
        ax.plot([p[0] for p in points], [p[1] for p in points], label=label)
    ax.set_xlabel("generation")
    ax.set_ylabel("unsafe frequency")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="best", fontsize=8)

    side_rows = []
    for label, points in series:
        side_rows.extend((label, fmt_float(x), "", fmt_float(v), "")
                         for x, v in points)
    side = _save(fig, spec, side_rows)
    return {"command": "plot-timeseries", "out": spec.out,
            "sidecar": str(side), "series": len(series),
            "points": sum(len(p) for _, p in series)}


_RENDERERS = {"heatmap": render_heatmap, "scan": render_risk_scan,
              "zealots": render_zealot_curve, "timeseries": render_timeseries}


def render(spec: FigureSpec) -> dict:
    return _RENDERERS[spec.family](spec)
