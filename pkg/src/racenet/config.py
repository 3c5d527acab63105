"""Experiment configuration files (JSON).

Layout (all sections except ``network`` and ``protocol`` may be omitted):

    {
      "game":     {"c": 1.0, "b": 4.0, "B": 1e4, "W": 100.0, "s": 1.5,
                   "p_fo": 0.5, "p_r": [0.0, 0.5, 1.0]},
      "network":  {"type": "dms", "nodes": 1000, "m": 2, "seed": 7,
                   "instances": 10},
      "dynamics": {"normalized": false, "update_rule": "async", "beta": 1.0},
      "protocol": {"generations": 10000, "window": 1000, "replicates": 25,
                   "master_seed": 0, "safe_fraction": 0.5},
      "zealots":  {"fractions": [0.0, 0.02], "order": "descending",
                   "strategy": "AS", "interference": "none"},
      "output":   {"directory": "out", "timeseries": false, "stride": 1}
    }

A game entry may be a list, which declares a sweep axis; cells enumerate the
axes row-major in the order the keys appear in the file.  ``network.files``
(a list of edge-list paths) replaces the generator fields and runs one
instance per file.  Unknown keys anywhere are hard errors, as are values of
the wrong type: silent typos must not silently change an experiment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .dynamics import DynamicsConfig, Strategy, UpdateRule
from .errors import ConfigError
from .experiments import (InterferenceMode, NetworkSpec, RunProtocol,
                          ZealotOrder, ZealotSpec)
from .game import RaceParameters

__all__ = ["LoadedConfig", "load_config"]

_GAME_KEYS = ("c", "b", "B", "W", "s", "p_fo", "p_r")
_NETWORK_KEYS = ("type", "nodes", "m", "side", "neighborhood", "seed",
                 "instances", "files")
_DYNAMICS_KEYS = ("normalized", "update_rule", "beta")
_PROTOCOL_KEYS = ("generations", "window", "replicates", "master_seed",
                  "safe_fraction")
_ZEALOT_KEYS = ("fractions", "order", "strategy", "interference")
_OUTPUT_KEYS = ("directory", "timeseries", "stride")
_SECTIONS = ("game", "network", "dynamics", "protocol", "zealots", "output")


@dataclass(frozen=True)
class LoadedConfig:
    base_params: RaceParameters
    grid: dict
    network: NetworkSpec
    cfg: DynamicsConfig
    protocol: RunProtocol
    fractions: tuple[float, ...]
    zealot_order: ZealotOrder
    zealot_strategy: Strategy
    interference: InterferenceMode
    output_dir: str
    timeseries: bool
    stride: int
    safe_fraction: float

    def zealot_spec(self, fraction: float) -> ZealotSpec:
        return ZealotSpec(fraction=fraction, order=self.zealot_order,
                          strategy=self.zealot_strategy,
                          interference=self.interference)

    def resolved(self) -> dict:
        """Fully resolved config (every default filled) for the manifest."""
        game: dict = {k: getattr(self.base_params, k) for k in _GAME_KEYS}
        for name, values in self.grid.items():
            game[name] = list(values)
        net: dict = {"type": self.network.kind}
        if self.network.kind == "files":
            net["files"] = list(self.network.files)
        elif self.network.kind in ("lattice4", "lattice8"):
            net["side"] = self.network.side
        else:
            net["nodes"] = self.network.nodes
            if self.network.kind in ("ba", "dms"):
                net["m"] = self.network.m
                net["seed"] = self.network.seed
        net["instances"] = self.protocol.network_instances
        return {
            "game": game,
            "network": net,
            "dynamics": {"normalized": self.cfg.normalized,
                         "update_rule": self.cfg.update_rule.value,
                         "beta": self.cfg.beta},
            "protocol": {"generations": self.protocol.generations,
                         "window": self.protocol.window,
                         "replicates": self.protocol.replicates,
                         "master_seed": self.protocol.master_seed,
                         "safe_fraction": self.safe_fraction},
            "zealots": {"fractions": list(self.fractions),
                        "order": self.zealot_order.value,
                        "strategy": self.zealot_strategy.name,
                        "interference": self.interference.value},
            "output": {"directory": self.output_dir,
                       "timeseries": self.timeseries,
                       "stride": self.stride},
        }


def _check_keys(section: dict, allowed, where: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in section {where!r} "
                              f"(allowed: {', '.join(allowed)})")


def _number(section: dict, key: str, where: str, default):
    v = section.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {v!r}")
    return v


def _integer(section: dict, key: str, where: str, default):
    v = section.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}.{key} must be an integer, got {v!r}")
    return v


def _boolean(section: dict, key: str, where: str, default):
    v = section.get(key, default)
    if not isinstance(v, bool):
        raise ConfigError(f"{where}.{key} must be true or false, got {v!r}")
    return v


def _enum(section: dict, key: str, where: str, enum_cls, default):
    v = section.get(key)
    if v is None:
        return default
    try:
        return enum_cls(v)
    except ValueError:
        choices = ", ".join(e.value for e in enum_cls)
        raise ConfigError(f"{where}.{key} must be one of {choices}, got {v!r}") from None


def load_config(path) -> LoadedConfig:
    """Parse and validate a configuration file.

    Raises :class:`ConfigError` naming the offending key on any problem;
    I/O errors propagate as OSError.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    _check_keys(raw, _SECTIONS, "top level")
    for name in ("network", "protocol"):
        if name not in raw:
            raise ConfigError(f"missing required section {name!r}")
    for name in _SECTIONS:
        if name in raw and not isinstance(raw[name], dict):
            raise ConfigError(f"section {name!r} must be an object")

    game = raw.get("game", {})
    _check_keys(game, _GAME_KEYS, "game")
    scalars = {}
    grid = {}
    for key in _GAME_KEYS:
        if key not in game:
            continue
        v = game[key]
        if isinstance(v, list):
            if not v:
                raise ConfigError(f"game.{key} axis must be non-empty")
            for x in v:
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise ConfigError(f"game.{key} axis values must be numbers, got {x!r}")
            grid[key] = tuple(float(x) for x in v)
        elif isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"game.{key} must be a number or list of numbers, got {v!r}")
        else:
            scalars[key] = float(v)

    dyn = raw.get("dynamics", {})
    _check_keys(dyn, _DYNAMICS_KEYS, "dynamics")
    beta = float(_number(dyn, "beta", "dynamics", 1.0))
    cfg = DynamicsConfig(
        normalized=_boolean(dyn, "normalized", "dynamics", False),
        update_rule=_enum(dyn, "update_rule", "dynamics", UpdateRule,
                          UpdateRule.ASYNCHRONOUS),
        beta=beta,
    )
    base_params = RaceParameters(beta=beta, **scalars)

    net = raw["network"]
    _check_keys(net, _NETWORK_KEYS, "network")
    files = net.get("files")
    if files is not None:
        if not isinstance(files, list) or not all(isinstance(f, str) for f in files):
            raise ConfigError("network.files must be a list of paths")
        for key in ("nodes", "m", "side", "seed"):
            if key in net:
                raise ConfigError(f"network.files excludes network.{key}")
        kind = net.get("type", "files")
        if kind != "files":
            raise ConfigError("network.files requires type 'files' (or no type)")
        network = NetworkSpec(kind="files", files=tuple(files))
        instances = _integer(net, "instances", "network", len(files))
        if instances != len(files):
            raise ConfigError(f"network.instances ({instances}) must match the "
                              f"number of files ({len(files)})")
    else:
        kind = net.get("type")
        if kind == "lattice":
            nb = _integer(net, "neighborhood", "network", 4)
            if nb not in (4, 8):
                raise ConfigError(f"network.neighborhood must be 4 or 8, got {nb}")
            kind = f"lattice{nb}"
        elif "neighborhood" in net:
            raise ConfigError("network.neighborhood applies only to type 'lattice'")
        if kind not in ("complete", "lattice4", "lattice8", "ba", "dms"):
            raise ConfigError(
                f"network.type must be one of complete, lattice, lattice4, "
                f"lattice8, ba, dms; got {kind!r}")
        network = NetworkSpec(
            kind=kind,
            nodes=_integer(net, "nodes", "network", 0),
            m=_integer(net, "m", "network", 2),
            side=_integer(net, "side", "network", 0),
            seed=_integer(net, "seed", "network", 0),
        )
        instances = _integer(net, "instances", "network",
                             1 if kind in ("complete", "lattice4", "lattice8") else 10)

    proto = raw["protocol"]
    _check_keys(proto, _PROTOCOL_KEYS, "protocol")
    for key in ("generations", "window"):
        if key not in proto:
            raise ConfigError(f"protocol.{key} is required")
    safe_fraction = float(_number(proto, "safe_fraction", "protocol", 0.5))
    if not 0.0 <= safe_fraction <= 1.0:
        raise ConfigError(f"protocol.safe_fraction must be in [0, 1], got {safe_fraction}")
    protocol = RunProtocol(
        generations=_integer(proto, "generations", "protocol", None),
        window=_integer(proto, "window", "protocol", None),
        replicates=_integer(proto, "replicates", "protocol", 25),
        network_instances=instances,
        master_seed=_integer(proto, "master_seed", "protocol", 0),
    )

    zeal = raw.get("zealots", {})
    _check_keys(zeal, _ZEALOT_KEYS, "zealots")
    fractions_raw = zeal.get("fractions", [0.0])
    if not isinstance(fractions_raw, list) or not fractions_raw:
        raise ConfigError("zealots.fractions must be a non-empty list")
    fractions = []
    for f in fractions_raw:
        if isinstance(f, bool) or not isinstance(f, (int, float)):
            raise ConfigError(f"zealots.fractions values must be numbers, got {f!r}")
        fractions.append(float(f))
    strategy_name = zeal.get("strategy", "AS")
    if strategy_name not in ("AS", "AU"):
        raise ConfigError(f"zealots.strategy must be 'AS' or 'AU', got {strategy_name!r}")
    order = _enum(zeal, "order", "zealots", ZealotOrder, ZealotOrder.DESCENDING)
    interference = _enum(zeal, "interference", "zealots", InterferenceMode,
                         InterferenceMode.NONE)

    out = raw.get("output", {})
    _check_keys(out, _OUTPUT_KEYS, "output")
    directory = out.get("directory", "out")
    if not isinstance(directory, str) or not directory:
        raise ConfigError(f"output.directory must be a non-empty string, got {directory!r}")
    stride = _integer(out, "stride", "output", 1)
    if stride < 1:
        raise ConfigError(f"output.stride must be >= 1, got {stride}")

    loaded = LoadedConfig(
        base_params=base_params,
        grid=grid,
        network=network,
        cfg=cfg,
        protocol=protocol,
        fractions=tuple(fractions),
        zealot_order=order,
        zealot_strategy=Strategy[strategy_name],
        interference=interference,
        output_dir=directory,
        timeseries=_boolean(out, "timeseries", "output", False),
        stride=stride,
        safe_fraction=safe_fraction,
    )
    # surface invalid fraction/order combinations at load time
    for f in loaded.fractions:
        loaded.zealot_spec(f)
    return loaded
