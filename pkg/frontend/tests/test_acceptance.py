"""Acceptance checklist for the plotting package."""

from pathlib import Path

from raceplots import FigureSpec, render, sidecar_path
from raceplots.io import read_table


def report(num, ok, detail):
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_11_figure_families(simdata, tmp_path):
    """All four families render; sidecars reproduce; overlays match regions."""
    specs = {
        "heatmap": dict(inputs=(str(simdata / "heat/sweep.csv"),), x="s",
                        y="p_r", regions=str(simdata / "regions_grid.csv")),
        "scan": dict(inputs=(str(simdata / "scanwm/sweep.csv"),
                             str(simdata / "scanlat/sweep.csv")),
                     x="p_r", regions=str(simdata / "regions_s15.csv")),
        "zealots": dict(inputs=(str(simdata / "zeal/sweep.csv"),)),
        "timeseries": dict(inputs=(str(simdata / "ts/timeseries.csv"),),
                           value_column="au_all"),
    }

    sidecars = {}
    for family, kwargs in specs.items():
        for attempt in ("a", "b"):
            out = tmp_path / f"{family}_{attempt}.png"
            info = render(FigureSpec(family=family, out=str(out), **kwargs))
            assert out.stat().st_size > 0, f"{family}: empty image"
            assert info["out"] == str(out)
            sidecars.setdefault(family, []).append(
                sidecar_path(out).read_bytes())
    stable = all(a == b for a, b in sidecars.values())

    # overlay coordinates must reproduce the closed-form boundary table
    _, rows = read_table(simdata / "regions_grid.csv")
    expected = {(f"boundary_{name}", float(r["s"])): float(r[name])
                for r in rows for name in ("early_lo", "early_hi")}
    header, side = read_table(sidecar_path(tmp_path / "heatmap_a.png"))
    drawn = {(r["series"], float(r["x"])): float(r["y"])
             for r in side if r["series"].startswith("boundary_")}
    overlay_ok = drawn.keys() == expected.keys() and all(
        abs(drawn[k] - v) <= 1e-9 for k, v in expected.items())

    ok = stable and overlay_ok
    report(11, ok, f"4 families rendered twice; sidecars stable={stable}, "
                   f"overlay points={len(drawn)} within 1e-9={overlay_ok}")
    assert stable, "sidecar bytes changed between identical runs"
    assert overlay_ok, "heatmap overlay deviates from the regions table"
