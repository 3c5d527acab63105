"""Entry-point behavior: exit codes, summary line, overwrite semantics."""

import json
import shutil
import subprocess

from raceplots.cli import main_heatmap, main_scan, main_timeseries, main_zealots
from raceplots.figures import sidecar_path


def test_heatmap_summary_line(simdata, tmp_path, capsys):
    out = tmp_path / "heat.png"
    rc = main_heatmap(["--input", str(simdata / "heat/sweep.csv"),
                       "--out", str(out), "--x", "s", "--y", "p_r",
                       "--regions", str(simdata / "regions_grid.csv")])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    info = json.loads(lines[0])
    assert info["command"] == "plot-heatmap"
    assert info["cells"] == 6
    assert info["overlays"] == 2
    assert out.exists()


def test_scan_accepts_repeated_inputs(simdata, tmp_path, capsys):
    rc = main_scan(["--input", str(simdata / "scanwm/sweep.csv"),
                    "--input", str(simdata / "scanlat/sweep.csv"),
                    "--out", str(tmp_path / "scan.png")])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["series"] == 2


def test_bad_column_exits_2_and_names_it(simdata, tmp_path, capsys):
    rc = main_zealots(["--input", str(simdata / "zeal/sweep.csv"),
                       "--out", str(tmp_path / "z.png"),
                       "--value-column", "au_freq_typo"])
    captured = capsys.readouterr()
    assert rc == 2
    assert "au_freq_typo" in captured.err
    assert captured.out == ""


def test_missing_file_exits_3(tmp_path, capsys):
    rc = main_timeseries(["--input", str(tmp_path / "nowhere.csv"),
                          "--out", str(tmp_path / "ts.png")])
    assert rc == 3
    assert "nowhere.csv" in capsys.readouterr().err


def test_rerun_rewrites_identical_sidecar(simdata, tmp_path, capsys):
    argv = ["--input", str(simdata / "zeal/sweep.csv"),
            "--out", str(tmp_path / "z.png")]
    assert main_zealots(argv) == 0
    first = sidecar_path(tmp_path / "z.png").read_bytes()
    assert main_zealots(argv) == 0
    assert sidecar_path(tmp_path / "z.png").read_bytes() == first


def test_console_script_on_path(simdata, tmp_path):
    exe = shutil.which("plot-timeseries")
    assert exe is not None
    proc = subprocess.run([exe, "--input", str(simdata / "ts/timeseries.csv"),
                           "--out", str(tmp_path / "ts.png")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "plot-timeseries"
