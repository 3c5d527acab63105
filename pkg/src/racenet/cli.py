"""Command-line interface.

Subcommands
-----------
generate-network   write edge-list files for a network recipe
run                one parameter cell from a config file -> sweep.csv
sweep              full parameter grid from a config file -> sweep.csv
zealots            zealot-fraction progression from a config file -> sweep.csv
regions            closed-form region boundaries / classification -> CSV

Contract: exit 0 on success, 2 on validation/config errors, 3 on I/O errors.
stdout carries one machine-readable JSON summary line; progress and
diagnostics go to stderr.  Outputs are byte-identical for identical inputs
regardless of --threads (default: RACE_SIM_THREADS, else the CPU count), and
partially written files are removed on failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace

from . import __version__
from .config import LoadedConfig, load_config
from .csvio import (REGIONS_COLUMNS, write_manifest, write_regions_csv,
                    write_sweep_csv, write_timeseries_csv)
from .errors import ParseError, ValidationError
from .experiments import NetworkSpec, run_replicate, sweep, zealot_progression
from .game import (RaceParameters, Regime, classify_region,
                   early_region_boundaries, late_risk_dominance_boundary,
                   late_welfare_boundary)
from .networks import save_edge_list
from .rng import derive_seed

CONFIG_SCHEMA = 1


def _default_threads() -> int:
    env = os.environ.get("RACE_SIM_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise ValidationError(f"RACE_SIM_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise ValidationError(f"RACE_SIM_THREADS must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def _progress(msg: str) -> None:
    print(f"[racenet] {msg}", file=sys.stderr, flush=True)


def _summary(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True), flush=True)


def _parse_values(text: str, flag: str) -> list[float]:
    """Comma list ('0,0.5,1') or linspace ('start:stop:count')."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:count")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError("count must be >= 1")
            if count == 1:
                return [start]
            step = (stop - start) / (count - 1)
            return [start + i * step for i in range(count)]
        return [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError as exc:
        raise ValidationError(f"{flag}: cannot parse {text!r} ({exc})") from None


class _OutputTracker:
    """Records created files so failures can clean up after themselves."""

    def __init__(self):
        self.paths: list[str] = []

    def add(self, path: str) -> str:
        self.paths.append(path)
        return path

    def discard_all(self) -> None:
        for p in self.paths:
            try:
                os.unlink(p)
            except OSError:
                pass


def _lattice_kind(kind: str, neighborhood: int) -> str:
    if kind == "lattice":
        if neighborhood not in (4, 8):
            raise ValidationError(f"--neighborhood must be 4 or 8, got {neighborhood}")
        return f"lattice{neighborhood}"
    return kind


def cmd_generate_network(args) -> int:
    kind = _lattice_kind(args.type, args.neighborhood)
    spec = NetworkSpec(kind=kind, nodes=args.nodes, m=args.m,
                       side=args.side, seed=args.seed)
    deterministic = kind in ("complete", "lattice4", "lattice8")
    count = 1 if deterministic else args.instances
    os.makedirs(args.out_dir, exist_ok=True)
    tracker = _OutputTracker()
    written = []
    try:
        for i in range(count):
            g = spec.instance(i)
            p = g.provenance
            path = os.path.join(args.out_dir, f"net_{p.generator}_{p.seed}.edges")
            save_edge_list(g, tracker.add(path))
            written.append(path)
            _progress(f"wrote {path} (Z={g.n}, edges={g.edge_count})")
    except Exception:
        tracker.discard_all()
        raise
    _summary({"command": "generate-network", "files": written})
    return 0


def _load(args) -> LoadedConfig:
    cfg = load_config(args.config)
    if args.out_dir is not None:
        cfg = replace(cfg, output_dir=args.out_dir)
    return cfg


def _check_network_files(cfg: LoadedConfig) -> None:
    for path in cfg.network.files:
        if not os.path.exists(path):
            raise FileNotFoundError(f"network file not found: {path}")


def _single_fraction(cfg: LoadedConfig) -> float:
    if len(cfg.fractions) != 1:
        raise ValidationError(
            f"this command needs exactly one zealots.fractions entry, "
            f"got {len(cfg.fractions)} (use the zealots command for progressions)")
    return cfg.fractions[0]


def _emit_outputs(cfg: LoadedConfig, records, command: str, threads: int) -> int:
    os.makedirs(cfg.output_dir, exist_ok=True)
    tracker = _OutputTracker()
    try:
        sweep_path = os.path.join(cfg.output_dir, "sweep.csv")
        write_sweep_csv(records, tracker.add(sweep_path))
        outputs = [sweep_path]
        if cfg.timeseries:
            g = cfg.network.instance(0)
            zspec = cfg.zealot_spec(cfg.fractions[0])
            res = run_replicate(
                g, records[0].params, cfg.cfg, cfg.protocol, zspec,
                seed=derive_seed(cfg.protocol.master_seed, 0, 0, 0),
                safe_fraction=cfg.safe_fraction, record_timeseries=True,
                stride=cfg.stride)
            ts_path = os.path.join(cfg.output_dir, "timeseries.csv")
            write_timeseries_csv(res.timeseries, tracker.add(ts_path))
            outputs.append(ts_path)
        manifest_path = os.path.join(cfg.output_dir, "manifest.json")
        write_manifest({"tool": "racenet", "version": __version__,
                        "config_schema": CONFIG_SCHEMA, "command": command,
                        "config": cfg.resolved()}, tracker.add(manifest_path))
        outputs.append(manifest_path)
    except Exception:
        tracker.discard_all()
        raise
    _summary({"command": command, "rows": len(records), "outputs": outputs})
    return 0


def cmd_run(args) -> int:
    cfg = _load(args)
    if cfg.grid:
        raise ValidationError(
            f"run needs scalar game parameters; axes given for "
            f"{', '.join(sorted(cfg.grid))} (use the sweep command)")
    fraction = _single_fraction(cfg)
    _check_network_files(cfg)
    threads = args.threads or _default_threads()
    t0 = time.perf_counter()
    n_tasks = cfg.protocol.network_instances * cfg.protocol.replicates
    _progress(f"run: {n_tasks} replicates on {cfg.network.kind}, threads={threads}")
    records = sweep(cfg.base_params, {}, cfg.protocol, cfg.network, cfg.cfg,
                    cfg.zealot_spec(fraction), threads=threads,
                    safe_fraction=cfg.safe_fraction)
    _progress(f"run: finished in {time.perf_counter() - t0:.1f}s")
    return _emit_outputs(cfg, records, "run", threads)


def cmd_sweep(args) -> int:
    cfg = _load(args)
    fraction = _single_fraction(cfg)
    _check_network_files(cfg)
    threads = args.threads or _default_threads()
    t0 = time.perf_counter()
    n_cells = 1
    for vals in cfg.grid.values():
        n_cells *= len(vals)
    n_tasks = n_cells * cfg.protocol.network_instances * cfg.protocol.replicates
    _progress(f"sweep: {n_cells} cells, {n_tasks} replicates, threads={threads}")
    records = sweep(cfg.base_params, cfg.grid, cfg.protocol, cfg.network,
                    cfg.cfg, cfg.zealot_spec(fraction), threads=threads,
                    safe_fraction=cfg.safe_fraction)
    _progress(f"sweep: finished in {time.perf_counter() - t0:.1f}s")
    return _emit_outputs(cfg, records, "sweep", threads)


def cmd_zealots(args) -> int:
    cfg = _load(args)
    if cfg.grid:
        raise ValidationError(
            f"zealots needs scalar game parameters; axes given for "
            f"{', '.join(sorted(cfg.grid))}")
    _check_network_files(cfg)
    threads = args.threads or _default_threads()
    t0 = time.perf_counter()
    _progress(f"zealots: {len(cfg.fractions)} fractions x "
              f"{cfg.protocol.network_instances} instances x "
              f"{cfg.protocol.replicates} replicates, threads={threads}")
    records = []
    for ii in range(cfg.protocol.network_instances):
        g = cfg.network.instance(ii)
        records.extend(zealot_progression(
            g, cfg.base_params, cfg.cfg, cfg.protocol, cfg.fractions,
            order=cfg.zealot_order, strategy=cfg.zealot_strategy,
            interference=cfg.interference, instance_index=ii,
            threads=threads, safe_fraction=cfg.safe_fraction))
    records.sort(key=lambda r: (r.cell_index, r.instance_index, r.replicate_index))
    _progress(f"zealots: finished in {time.perf_counter() - t0:.1f}s")
    return _emit_outputs(cfg, records, "zealots", threads)


def _region_rows(args) -> list[dict]:
    regime = Regime(args.regime)
    s_values = _parse_values(args.s_grid, "--s-grid") if args.s_grid else (
        [args.s] if args.s is not None else [None])
    pfo_values = _parse_values(args.pfo_grid, "--pfo-grid") if args.pfo_grid else (
        [args.pfo] if args.pfo is not None else [None])
    pr_values = _parse_values(args.pr_grid, "--pr-grid") if args.pr_grid else (
        [args.pr] if args.pr is not None else [None])
    rows = []
    for s in s_values:
        for pfo in pfo_values:
            for pr in pr_values:
                row = dict.fromkeys(REGIONS_COLUMNS)
                row["regime"] = regime.value
                row["b"], row["c"] = args.b, args.c
                row["s"], row["p_fo"], row["p_r"] = s, pfo, pr
                if regime is Regime.EARLY:
                    if s is not None:
                        row["early_lo"], row["early_hi"] = early_region_boundaries(s)
                        if pr is not None:
                            p = RaceParameters(c=args.c, b=args.b, s=s, p_r=pr)
                            row["region"] = classify_region(p, Regime.EARLY).value
                else:
                    if pfo is not None:
                        p = RaceParameters(c=args.c, b=args.b, p_fo=pfo)
                        row["late_welfare"] = late_welfare_boundary(p)
                    if s is not None:
                        p = RaceParameters(c=args.c, b=args.b, s=s)
                        row["late_riskdom"] = late_risk_dominance_boundary(p)
                    if s is not None and pfo is not None and pr is not None:
                        p = RaceParameters(c=args.c, b=args.b, s=s, p_fo=pfo,
                                           p_r=pr)
                        row["region"] = classify_region(p, Regime.LATE).value
                rows.append(row)
    return rows


def cmd_regions(args) -> int:
    rows = _region_rows(args)
    if args.out == "-":
        write_regions_csv(rows, sys.stdout)
        sys.stdout.flush()
    else:
        tracker = _OutputTracker()
        try:
            with open(tracker.add(args.out), "w", encoding="ascii", newline="") as fh:
                write_regions_csv(rows, fh)
        except Exception:
            tracker.discard_all()
            raise
        _summary({"command": "regions", "rows": len(rows), "outputs": [args.out]})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="racenet",
        description="Simulate a development race with safety choices on networks.")
    parser.add_argument("--version", action="version", version=f"racenet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate-network", help="write edge-list files")
    p.add_argument("--type", required=True,
                   choices=["complete", "lattice", "lattice4", "lattice8", "ba", "dms"])
    p.add_argument("--nodes", type=int, default=0, help="population size")
    p.add_argument("--m", type=int, default=2, help="edges per new node")
    p.add_argument("--side", type=int, default=0, help="lattice side length")
    p.add_argument("--neighborhood", type=int, default=4,
                   help="lattice neighbourhood size, 4 or 8")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=1)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_generate_network)

    for name, func, help_text in (
            ("run", cmd_run, "single parameter cell -> sweep.csv"),
            ("sweep", cmd_sweep, "parameter grid -> sweep.csv"),
            ("zealots", cmd_zealots, "zealot progression -> sweep.csv")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="JSON configuration file")
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes (default: RACE_SIM_THREADS or CPU count)")
        p.add_argument("--out-dir", default=None,
                       help="override output.directory from the config")
        p.set_defaults(func=func)

    p = sub.add_parser("regions", help="closed-form boundaries and region labels")
    p.add_argument("--regime", required=True, choices=["early", "late"])
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--pfo", type=float, default=None)
    p.add_argument("--pr", type=float, default=None)
    p.add_argument("--b", type=float, default=4.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--s-grid", default=None, help="comma list or start:stop:count")
    p.add_argument("--pfo-grid", default=None, help="comma list or start:stop:count")
    p.add_argument("--pr-grid", default=None, help="comma list or start:stop:count")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_regions)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("racenet: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValidationError, ParseError) as exc:
        print(f"racenet: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"racenet: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
