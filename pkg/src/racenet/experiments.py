"""Experiment drivers: replicates, parameter sweeps, zealot interventions.

Seed discipline
---------------
Every simulation task is addressed by (cell, instance, replicate) and runs on
its own stream seeded with ``derive_seed(master_seed, cell, instance,
replicate)``.  Results are therefore independent of execution order and of
the worker-pool size, and reruns are bit-identical.

A *cell* is one point of the parameter grid (index in row-major order over
the grid axes as given); zealot progressions reuse the cell slot for the
fraction index, so a progression over the single fraction 0 reproduces a
one-cell sweep exactly.

Accounting
----------
A replicate runs G generations and averages the trailing ``window``
generations (asynchronous: one generation = Z single-node steps).  Window
sums are integers (node-generations in the unsafe state), kept alongside the
derived float frequencies so totals can be checked exactly.  Frequencies over
an empty set (a degree class with no members, or the non-zealot pool when
everyone is a zealot) are NaN, never 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from multiprocessing import get_context

import numpy as np

from . import _kernel
from .dynamics import (DynamicsConfig, PopulationState, Strategy, UpdateRule,
                       init_population, set_zealots)
from .errors import ValidationError
from .game import RaceParameters, race_payoff_matrix
from .networks import (Graph, Provenance, barabasi_albert, check_hub_classes,
                       complete, degree_classes, dms, lattice, load_edge_list,
                       nominal_connectivity, rank_by_degree)
from .rng import SplitMix64, derive_seed

__all__ = [
    "RunProtocol",
    "NetworkSpec",
    "ZealotOrder",
    "InterferenceMode",
    "ZealotSpec",
    "ReplicateResult",
    "CellAggregate",
    "resolve_zealots",
    "resolve_bonus",
    "run_replicate",
    "sweep",
    "zealot_progression",
    "degree_class_timeseries",
    "aggregate",
    "full_scale_protocol",
    "desk_protocol",
]


@dataclass(frozen=True)
class RunProtocol:
    """How much simulation to do and how to average it.

    generations        total generations per replicate
    window             trailing generations averaged into frequencies
    replicates         independent runs per (cell, instance)
    network_instances  independently generated graphs per cell
    master_seed        root of the seed derivation tree
    """

    generations: int
    window: int
    replicates: int = 25
    network_instances: int = 10
    master_seed: int = 0

    def __post_init__(self):
        for name in ("generations", "window", "replicates", "network_instances"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValidationError(f"{name} must be an integer >= 1, got {v!r}")
        if self.window > self.generations:
            raise ValidationError(
                f"window ({self.window}) must not exceed generations ({self.generations})")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            raise ValidationError(f"master_seed must be a 64-bit integer, got {self.master_seed!r}")


def full_scale_protocol(kind: str, master_seed: int = 0) -> RunProtocol:
    """Full-scale protocol: 10^4 generations on scale-free graphs, 10^3
    otherwise, averaging the final 10^3, 25 replicates x 10 instances."""
    gens = 10_000 if kind in ("ba", "dms") else 1_000
    return RunProtocol(generations=gens, window=1_000, replicates=25,
                       network_instances=10, master_seed=master_seed)


def desk_protocol(kind: str, master_seed: int = 0) -> RunProtocol:
    """Half-scale protocol for quick desk runs and CI."""
    gens = 5_000 if kind in ("ba", "dms") else 500
    return RunProtocol(generations=gens, window=gens // 2, replicates=5,
                       network_instances=3, master_seed=master_seed)


_NETWORK_KINDS = ("complete", "lattice4", "lattice8", "ba", "dms", "files")


@dataclass(frozen=True)
class NetworkSpec:
    """Recipe for the interaction graphs of an experiment.

    kind     complete | lattice4 | lattice8 | ba | dms | files
    nodes    population size (ignored for lattices and files)
    m        edges per new node (growth models)
    side     lattice side length
    seed     root seed; instance i uses derive_seed(seed, i)
    files    pre-generated edge lists, one per instance (kind="files")

    Growth-model instances are checked for well-separated degree classes
    (max degree >= 3 z); generation fails loudly otherwise.
    """

    kind: str
    nodes: int = 0
    m: int = 2
    side: int = 0
    seed: int = 0
    files: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in _NETWORK_KINDS:
            raise ValidationError(f"unknown network kind {self.kind!r}")
        if self.kind == "files" and not self.files:
            raise ValidationError("network kind 'files' needs at least one file")
        if self.kind in ("ba", "dms") and self.nodes < 2:
            raise ValidationError(f"network kind {self.kind!r} needs nodes >= 2, got {self.nodes}")
        if self.kind == "complete" and self.nodes < 2:
            raise ValidationError(f"complete network needs nodes >= 2, got {self.nodes}")
        if self.kind in ("lattice4", "lattice8") and self.side < 3:
            raise ValidationError(f"lattice network needs side >= 3, got {self.side}")

    def instance_count_hint(self) -> int:
        return len(self.files) if self.kind == "files" else 0

    def instance(self, index: int) -> Graph:
        """Graph for instance ``index``; deterministic kinds repeat the same graph."""
        if self.kind == "complete":
            return complete(self.nodes)
        if self.kind == "lattice4":
            return lattice(self.side, 4)
        if self.kind == "lattice8":
            return lattice(self.side, 8)
        if self.kind == "files":
            if not 0 <= index < len(self.files):
                raise ValidationError(
                    f"network instance {index} requested but only {len(self.files)} files given")
            g = load_edge_list(self.files[index])
        elif self.kind == "ba":
            g = barabasi_albert(self.nodes, self.m, derive_seed(self.seed, index))
        else:
            g = dms(self.nodes, self.m, derive_seed(self.seed, index))
        if g.provenance.generator in ("ba", "dms"):
            check_hub_classes(g, nominal_connectivity(g))
        return g


class ZealotOrder(Enum):
    DESCENDING = "descending"
    REVERSE = "reverse"


class InterferenceMode(Enum):
    """External support for zealots' development speed.

    NONE        no bonus
    ACCELERATE  2 B / W: the payoff-rate edge of an accelerated developer
    FUND        flat 1e7, dwarfing every game payoff
    """

    NONE = "none"
    ACCELERATE = "accelerate"
    FUND = "fund"


def resolve_bonus(mode: InterferenceMode, params: RaceParameters) -> float:
    if mode is InterferenceMode.NONE:
        return 0.0
    if mode is InterferenceMode.ACCELERATE:
        return 2.0 * params.B / params.W
    return 1.0e7


@dataclass(frozen=True)
class ZealotSpec:
    """Which nodes are pinned, to what, and with what support.

    fraction   share of the population pinned (rounded to nearest count)
    order      DESCENDING fills from the highest-degree node down; REVERSE
               fills the top-degree decile from its bottom up (fraction <= 0.1)
    strategy   the pinned strategy
    interference  external support mode (bonus resolved against parameters)
    """

    fraction: float = 0.0
    order: ZealotOrder = ZealotOrder.DESCENDING
    strategy: Strategy = Strategy.AS
    interference: InterferenceMode = InterferenceMode.NONE

    def __post_init__(self):
        if not (isinstance(self.fraction, (int, float)) and 0.0 <= self.fraction <= 1.0):
            raise ValidationError(f"zealot fraction must be in [0, 1], got {self.fraction}")
        if self.order is ZealotOrder.REVERSE and self.fraction > 0.1:
            raise ValidationError(
                f"reverse order fills the top-degree decile; fraction must be <= 0.1, "
                f"got {self.fraction}")


def resolve_zealots(spec: ZealotSpec, g: Graph) -> np.ndarray:
    """Node ids pinned under ``spec`` on graph ``g``.

    Counts round half up.  Sets are nested along increasing fractions for a
    fixed order.
    """
    count = int(spec.fraction * g.n + 0.5)
    if count == 0:
        return np.empty(0, dtype=np.int64)
    ranking = rank_by_degree(g)
    if spec.order is ZealotOrder.DESCENDING:
        return ranking[:count]
    pool = ranking[:int(0.1 * g.n + 0.5)]
    if count > len(pool):
        raise ValidationError(
            f"reverse order: {count} zealots exceed the top-degree decile ({len(pool)} nodes)")
    return pool[len(pool) - count:]


@dataclass(frozen=True)
class ReplicateResult:
    """Outcome of one replicate, float frequencies plus exact window sums.

    au_freq_all reconstructs as window_au_sum_all / (window * n_nodes);
    the per-class and non-zealot frequencies likewise from their sums.  NaN
    marks an empty denominator.  ``timeseries`` (present when recorded) has
    one row per kept generation: (generation, au_all, au_low, au_med, au_high)
    as frequencies.
    """

    params: RaceParameters
    cfg: DynamicsConfig
    network: Provenance
    n_nodes: int
    generations: int
    window: int
    seed: int
    cell_index: int
    instance_index: int
    replicate_index: int
    zealot_fraction: float
    zealot_order: ZealotOrder
    zealot_strategy: Strategy
    interference: InterferenceMode
    n_zealots: int
    class_sizes: tuple[int, int, int]
    window_au_sum_all: int
    window_au_sum_nonzealot: int
    window_au_sum_by_class: tuple[int, int, int]
    au_freq_all: float
    au_freq_nonzealot: float
    au_freq_by_class: tuple[float, float, float]
    timeseries: np.ndarray | None = field(default=None, compare=False)

    # NaN frequencies (empty denominators) must compare equal, or results
    # coming back from a worker pool would differ from in-process ones
    def __eq__(self, other):
        if not isinstance(other, ReplicateResult):
            return NotImplemented
        for f in fields(self):
            if not f.compare:
                continue
            if not _nan_aware_eq(getattr(self, f.name), getattr(other, f.name)):
                return False
        return True

    def __hash__(self):
        return hash((self.seed, self.cell_index, self.instance_index,
                     self.replicate_index))


def _nan_aware_eq(a, b) -> bool:
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(map(_nan_aware_eq, a, b))
    if isinstance(a, float) and isinstance(b, float):
        return a == b or (math.isnan(a) and math.isnan(b))
    return a == b


def _freq(total: int, denom: int) -> float:
    return total / denom if denom > 0 else math.nan


def run_replicate(g: Graph, params: RaceParameters, cfg: DynamicsConfig,
                  protocol: RunProtocol, zealot_spec: ZealotSpec | None = None,
                  *, seed: int, safe_fraction: float = 0.5,
                  record_timeseries: bool = False, stride: int = 1,
                  cell_index: int = 0, instance_index: int = 0,
                  replicate_index: int = 0) -> ReplicateResult:
    """Run one replicate on ``g`` and average the trailing window.

    Stream layout: Z initialization draws, then the update schedule's draws.
    Zealots are pinned after initialization without consuming randomness.
    Same inputs give a bit-identical result.
    """
    if stride < 1:
        raise ValidationError(f"stride must be >= 1, got {stride}")
    zspec = zealot_spec if zealot_spec is not None else ZealotSpec()
    rng = SplitMix64(seed)
    state = init_population(g, rng, safe_fraction)
    z_nodes = resolve_zealots(zspec, g)
    bonus = resolve_bonus(zspec.interference, params)
    set_zealots(state, z_nodes, zspec.strategy, bonus)

    class_of = degree_classes(g, nominal_connectivity(g))
    indptr, indices = g.csr()
    race = race_payoff_matrix(params).entries
    G = protocol.generations
    au_all = np.zeros(G + 1, dtype=np.int64)
    au_nz = np.zeros(G + 1, dtype=np.int64)
    au_cls = np.zeros((G + 1, 3), dtype=np.int64)
    evolver = (_kernel.evolve_async if cfg.update_rule is UpdateRule.ASYNCHRONOUS
               else _kernel.evolve_sync)
    evolver(indptr, indices, state.strategies, state.zealot, state.interference,
            race[0, 0], race[0, 1], race[1, 0], race[1, 1],
            cfg.normalized, cfg.beta, np.uint64(rng.state), np.int64(G),
            class_of, au_all, au_nz, au_cls)

    lo = G - protocol.window + 1
    sum_all = int(au_all[lo:G + 1].sum())
    sum_nz = int(au_nz[lo:G + 1].sum())
    sum_cls = tuple(int(x) for x in au_cls[lo:G + 1].sum(axis=0))
    sizes = tuple(int(np.count_nonzero(class_of == c)) for c in range(3))
    n_zeal = len(z_nodes)
    W = protocol.window

    ts = None
    if record_timeseries:
        gens = np.arange(0, G + 1, stride, dtype=np.int64)
        ts = np.empty((len(gens), 5), dtype=np.float64)
        ts[:, 0] = gens
        ts[:, 1] = au_all[gens] / g.n
        for c in range(3):
            ts[:, 2 + c] = au_cls[gens, c] / sizes[c] if sizes[c] else math.nan

    return ReplicateResult(
        params=params, cfg=cfg, network=g.provenance, n_nodes=g.n,
        generations=G, window=W, seed=seed, cell_index=cell_index,
        instance_index=instance_index, replicate_index=replicate_index,
        zealot_fraction=zspec.fraction, zealot_order=zspec.order,
        zealot_strategy=zspec.strategy, interference=zspec.interference,
        n_zealots=n_zeal, class_sizes=sizes,
        window_au_sum_all=sum_all, window_au_sum_nonzealot=sum_nz,
        window_au_sum_by_class=sum_cls,
        au_freq_all=_freq(sum_all, W * g.n),
        au_freq_nonzealot=_freq(sum_nz, W * (g.n - n_zeal)),
        au_freq_by_class=tuple(_freq(sum_cls[c], W * sizes[c]) for c in range(3)),
        timeseries=ts,
    )


_PARAM_NAMES = tuple(f.name for f in fields(RaceParameters))


def _grid_cells(base: RaceParameters, grid: dict) -> list[RaceParameters]:
    for name in grid:
        if name not in _PARAM_NAMES:
            raise ValidationError(f"unknown grid axis {name!r}")
        if not grid[name]:
            raise ValidationError(f"grid axis {name!r} is empty")
    axes = list(grid.items())
    cells = []
    for combo in itertools.product(*(vals for _, vals in axes)):
        cells.append(replace(base, **dict(zip((n for n, _ in axes), combo))))
    return cells


def _run_task(task):
    (g, params, cfg, protocol, zspec, seed, ci, ii, ri,
     safe_fraction, record_ts, stride) = task
    return run_replicate(g, params, cfg, protocol, zspec, seed=seed,
                         safe_fraction=safe_fraction,
                         record_timeseries=record_ts, stride=stride,
                         cell_index=ci, instance_index=ii, replicate_index=ri)


def _run_tasks(tasks, threads: int):
    if threads <= 1:
        return [_run_task(t) for t in tasks]
    with get_context("fork").Pool(threads) as pool:
        return pool.map(_run_task, tasks, chunksize=1)


def sweep(base_params: RaceParameters, grid: dict, protocol: RunProtocol,
          network_spec: NetworkSpec, cfg: DynamicsConfig,
          zealot_spec: ZealotSpec | None = None, *, threads: int = 1,
          safe_fraction: float = 0.5) -> list[ReplicateResult]:
    """Cross product of grid axes x network instances x replicates.

    Cells enumerate the grid row-major in the axis order given.  The result
    list is sorted by (cell, instance, replicate) and is independent of
    ``threads``.
    """
    cells = _grid_cells(base_params, grid)
    instances = [network_spec.instance(i) for i in range(protocol.network_instances)]
    tasks = []
    for ci, params in enumerate(cells):
        for ii, g in enumerate(instances):
            for ri in range(protocol.replicates):
                seed = derive_seed(protocol.master_seed, ci, ii, ri)
                tasks.append((g, params, cfg, protocol, zealot_spec, seed,
                              ci, ii, ri, safe_fraction, False, 1))
    results = _run_tasks(tasks, threads)
    results.sort(key=lambda r: (r.cell_index, r.instance_index, r.replicate_index))
    return results


def zealot_progression(g: Graph, params: RaceParameters, cfg: DynamicsConfig,
                       protocol: RunProtocol, fractions, *,
                       order: ZealotOrder = ZealotOrder.DESCENDING,
                       strategy: Strategy = Strategy.AS,
                       interference: InterferenceMode = InterferenceMode.NONE,
                       instance_index: int = 0, threads: int = 1,
                       safe_fraction: float = 0.5) -> list[ReplicateResult]:
    """Replicates at each zealot fraction on a fixed graph.

    The fraction index takes the cell slot in the seed derivation, so a
    progression over [0.0] is bit-identical to a one-cell sweep on the same
    graph.  Zealot sets are nested along the fraction list for a fixed order.
    """
    fr = list(fractions)
    if not fr:
        raise ValidationError("fractions must be non-empty")
    if any(b < a for a, b in zip(fr, fr[1:])):
        raise ValidationError(f"fractions must be sorted ascending, got {fr}")
    tasks = []
    for fi, f in enumerate(fr):
        zspec = ZealotSpec(fraction=f, order=order, strategy=strategy,
                           interference=interference)
        for ri in range(protocol.replicates):
            seed = derive_seed(protocol.master_seed, fi, instance_index, ri)
            tasks.append((g, params, cfg, protocol, zspec, seed,
                          fi, instance_index, ri, safe_fraction, False, 1))
    results = _run_tasks(tasks, threads)
    results.sort(key=lambda r: (r.cell_index, r.instance_index, r.replicate_index))
    return results


def degree_class_timeseries(g: Graph, params: RaceParameters, cfg: DynamicsConfig,
                            protocol: RunProtocol, *, seed: int,
                            stride: int = 1,
                            zealot_spec: ZealotSpec | None = None,
                            safe_fraction: float = 0.5) -> np.ndarray:
    """Per-generation unsafe frequencies, overall and per degree class.

    Rows are (generation, au_all, au_low, au_med, au_high) at the given
    stride, starting at generation 0.  Empty classes yield NaN columns.
    """
    res = run_replicate(g, params, cfg, protocol, zealot_spec, seed=seed,
                        safe_fraction=safe_fraction, record_timeseries=True,
                        stride=stride)
    return res.timeseries


@dataclass(frozen=True)
class CellAggregate:
    """Mean and standard error over the replicates x instances of one cell."""

    cell_index: int
    n: int
    params: RaceParameters
    zealot_fraction: float
    mean_au_all: float
    stderr_au_all: float
    mean_au_nonzealot: float
    stderr_au_nonzealot: float
    mean_by_class: tuple[float, float, float]
    stderr_by_class: tuple[float, float, float]

    def __eq__(self, other):
        if not isinstance(other, CellAggregate):
            return NotImplemented
        return all(_nan_aware_eq(getattr(self, f.name), getattr(other, f.name))
                   for f in fields(self))

    def __hash__(self):
        return hash((self.cell_index, self.n))


def _mean_stderr(values: list[float]) -> tuple[float, float]:
    vals = [v for v in values if not math.isnan(v)]
    if not vals:
        return (math.nan, math.nan)
    arr = np.array(vals)
    mean = float(arr.mean())
    if len(vals) < 2:
        return (mean, 0.0)
    return (mean, float(arr.std(ddof=1) / math.sqrt(len(vals))))


def aggregate(records: list[ReplicateResult]) -> list[CellAggregate]:
    """Per-cell mean and standard error, ordered by cell index.

    Insensitive to the order of ``records``.  NaN frequencies (empty classes
    or all-zealot pools) are excluded from their statistic; an all-NaN
    statistic stays NaN.
    """
    by_cell: dict[int, list[ReplicateResult]] = {}
    for r in records:
        by_cell.setdefault(r.cell_index, []).append(r)
    out = []
    for ci in sorted(by_cell):
        group = sorted(by_cell[ci],
                       key=lambda r: (r.instance_index, r.replicate_index))
        m_all, se_all = _mean_stderr([r.au_freq_all for r in group])
        m_nz, se_nz = _mean_stderr([r.au_freq_nonzealot for r in group])
        per_class = [_mean_stderr([r.au_freq_by_class[c] for r in group])
                     for c in range(3)]
        out.append(CellAggregate(
            cell_index=ci, n=len(group), params=group[0].params,
            zealot_fraction=group[0].zealot_fraction,
            mean_au_all=m_all, stderr_au_all=se_all,
            mean_au_nonzealot=m_nz, stderr_au_nonzealot=se_nz,
            mean_by_class=tuple(p[0] for p in per_class),
            stderr_by_class=tuple(p[1] for p in per_class),
        ))
    return out
