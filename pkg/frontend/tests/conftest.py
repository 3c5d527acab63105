"""Fixtures that build real simulator outputs once per session.

The plotting package consumes the simulator strictly through its command
line and file formats, so the fixtures shell out to ``racenet`` rather
than importing it.
"""

import json
import subprocess
import sys

import pytest

GAME = {"c": 1.0, "b": 4.0, "B": 1.0e4, "W": 100.0, "s": 1.5, "p_fo": 0.5}
PROTOCOL = {"generations": 50, "window": 10, "replicates": 2, "master_seed": 5}


def run_racenet(*argv, cwd):
    proc = subprocess.run([sys.executable, "-m", "racenet", *argv],
                          capture_output=True, text=True, cwd=cwd)
    assert proc.returncode == 0, f"racenet {argv} failed:\n{proc.stderr}"
    return proc


def write_config(directory, name, **sections):
    path = directory / name
    path.write_text(json.dumps(sections, indent=2))
    return path.name


@pytest.fixture(scope="session")
def simdata(tmp_path_factory):
    """Directory of simulator CSVs covering all four figure families."""
    root = tmp_path_factory.mktemp("simdata")

    grid_game = dict(GAME, s=[1.2, 1.6], p_r=[0.2, 0.5, 0.8])
    cfg = write_config(root, "heat.json", game=grid_game,
                       network={"type": "complete", "nodes": 30},
                       protocol=PROTOCOL, output={"directory": "heat"})
    run_racenet("sweep", cfg, "--threads", "1", cwd=root)

    scan_game = dict(GAME, p_r=[0.2, 0.5, 0.8])
    cfg = write_config(root, "scanwm.json", game=scan_game,
                       network={"type": "complete", "nodes": 30},
                       protocol=PROTOCOL, output={"directory": "scanwm"})
    run_racenet("sweep", cfg, "--threads", "1", cwd=root)
    cfg = write_config(root, "scanlat.json", game=scan_game,
                       network={"type": "lattice", "neighborhood": 4, "side": 6},
                       protocol=PROTOCOL, output={"directory": "scanlat"})
    run_racenet("sweep", cfg, "--threads", "1", cwd=root)

    cfg = write_config(root, "zeal.json", game=dict(GAME, p_r=0.5),
                       network={"type": "complete", "nodes": 40},
                       protocol=PROTOCOL,
                       zealots={"fractions": [0.0, 0.05, 0.1],
                                "order": "descending", "strategy": "AS"},
                       output={"directory": "zeal"})
    run_racenet("zealots", cfg, "--threads", "1", cwd=root)

    cfg = write_config(root, "ts.json", game=dict(GAME, p_r=0.5),
                       network={"type": "complete", "nodes": 30},
                       protocol=dict(PROTOCOL, generations=40, replicates=1),
                       output={"directory": "ts", "timeseries": True,
                               "stride": 5})
    run_racenet("run", cfg, "--threads", "1", cwd=root)

    run_racenet("regions", "--regime", "early", "--s-grid", "1.2,1.6",
                "--pr-grid", "0.2:0.8:3", "--out", "regions_grid.csv",
                cwd=root)
    run_racenet("regions", "--regime", "early", "--s", "1.5",
                "--pr-grid", "0.2,0.5,0.8", "--out", "regions_s15.csv",
                cwd=root)
    return root
