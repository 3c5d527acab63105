"""Imitation dynamics on a network: fitness, Fermi rule, update schedules.

Every node holds one unconditional race strategy (AS = always safe,
AU = always unsafe).  A node's fitness is the sum of its race payoffs against
all neighbours (optionally divided by degree), plus any external interference
bonus.  Strategy revision follows the pairwise-comparison rule: a focal node
picks a random neighbour and copies its strategy with the Fermi probability

    p = 1 / (1 + exp(beta (f_focal - f_neighbour)))

Zealots are nodes whose strategy is pinned; they are eligible as imitation
models but never revise.

Draw-order contract (the reproducibility backbone; the jitted kernel in
``_kernel`` consumes the identical stream):

* asynchronous step: 1 draw for the focal node, 1 for the neighbour,
  1 for acceptance -- always three draws, even when the focal node turns out
  to be a zealot or both strategies already match.
* synchronous generation: 2 draws per node (neighbour, acceptance) in node-id
  order, zealots included; all revisions apply simultaneously against the
  pre-update snapshot.

Functions here are the slow, obviously-correct reference path used by unit
tests and single-step inspection; long runs go through the kernel, which is
held to bit-identical trajectories by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from .errors import ValidationError
from .game import PayoffMatrix2
from .networks import Graph
from .rng import SplitMix64

__all__ = [
    "Strategy",
    "UpdateRule",
    "DynamicsConfig",
    "PopulationState",
    "init_population",
    "set_zealots",
    "fitness",
    "fermi_probability",
    "async_step",
    "sync_generation",
]

# beyond this the logistic saturates below 1e-304; define the result as exact
FERMI_CLAMP = 700.0


class Strategy(IntEnum):
    AS = 0
    AU = 1


class UpdateRule(Enum):
    ASYNCHRONOUS = "async"
    SYNCHRONOUS = "sync"


@dataclass(frozen=True)
class DynamicsConfig:
    """How fitness is accumulated and strategies are revised.

    normalized   divide accumulated payoff by degree (comparable across
                 degree classes; off = raw accumulation)
    update_rule  asynchronous (one random node per step, Z steps make a
                 generation) or synchronous (all nodes at once)
    beta         selection intensity of the Fermi rule (>= 0)
    """

    normalized: bool = False
    update_rule: UpdateRule = UpdateRule.ASYNCHRONOUS
    beta: float = 1.0

    def __post_init__(self):
        if not (isinstance(self.beta, (int, float)) and math.isfinite(self.beta)
                and self.beta >= 0):
            raise ValidationError(f"beta must be a finite number >= 0, got {self.beta}")
        if not isinstance(self.update_rule, UpdateRule):
            raise ValidationError(f"update_rule must be an UpdateRule, got {self.update_rule!r}")


@dataclass
class PopulationState:
    """Mutable per-node state of one simulation.

    strategies    uint8, Strategy codes
    zealot        int8, pinned Strategy code or -1 for free nodes
    interference  float64 fitness bonus (0 for unmodified nodes)

    Invariant: a zealot's strategy always equals its pinned code.
    """

    strategies: np.ndarray
    zealot: np.ndarray
    interference: np.ndarray

    @classmethod
    def empty(cls, n: int) -> "PopulationState":
        return cls(
            strategies=np.zeros(n, dtype=np.uint8),
            zealot=np.full(n, -1, dtype=np.int8),
            interference=np.zeros(n, dtype=np.float64),
        )

    @property
    def n(self) -> int:
        return int(self.strategies.shape[0])

    def copy(self) -> "PopulationState":
        return PopulationState(self.strategies.copy(), self.zealot.copy(),
                               self.interference.copy())

    def zealot_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.zealot >= 0)

    def au_count(self) -> int:
        return int(np.count_nonzero(self.strategies == Strategy.AU))


def init_population(g: Graph, rng: SplitMix64, safe_fraction: float = 0.5) -> PopulationState:
    """Random initial population: one u01 draw per node, in id order.

    Node i starts as AS when its draw is below safe_fraction, else AU.
    No zealots, no interference.
    """
    if not 0.0 <= safe_fraction <= 1.0:
        raise ValidationError(f"safe_fraction must be in [0, 1], got {safe_fraction}")
    state = PopulationState.empty(g.n)
    for i in range(g.n):
        if rng.next_u01() >= safe_fraction:
            state.strategies[i] = Strategy.AU
    return state


def set_zealots(state: PopulationState, nodes, strategy: Strategy,
                bonus: float = 0.0) -> PopulationState:
    """Pin the listed nodes to ``strategy`` and give them a fitness bonus.

    Overwrites any current strategy; idempotent.  Returns the same state.
    """
    if not math.isfinite(bonus):
        raise ValidationError(f"interference bonus must be finite, got {bonus}")
    for raw in nodes:
        i = int(raw)
        if not 0 <= i < state.n:
            raise ValidationError(f"zealot node id {i} out of range")
        state.zealot[i] = int(strategy)
        state.strategies[i] = int(strategy)
        state.interference[i] = bonus
    return state


def fitness(state: PopulationState, g: Graph, race_matrix: PayoffMatrix2,
            node: int, cfg: DynamicsConfig) -> float:
    """Accumulated (or degree-normalized) race payoff plus interference.

    Uses the neighbour strategy counts, so evaluation is O(k):
    f = (k - n_AU) M[s, AS] + n_AU M[s, AU].
    """
    neigh = g.adj[node]
    k = len(neigh)
    n_au = int(np.count_nonzero(state.strategies[neigh]))
    e = race_matrix.entries
    s = state.strategies[node]
    if s == Strategy.AS:
        f = (k - n_au) * e[0, 0] + n_au * e[0, 1]
    else:
        f = (k - n_au) * e[1, 0] + n_au * e[1, 1]
    if cfg.normalized:
        f = f / k
    return float(f + state.interference[node])


def fermi_probability(f_focal: float, f_model: float, beta: float) -> float:
    """Probability that the focal player copies the model's strategy.

    Saturates to exactly 0.0 / 1.0 once the exponent magnitude reaches 700
    (where the true value is below 1e-304 anyway); equal fitness gives 0.5.
    """
    x = beta * (f_focal - f_model)
    if x >= FERMI_CLAMP:
        return 0.0
    if x <= -FERMI_CLAMP:
        return 1.0
    return 1.0 / (1.0 + math.exp(x))


def async_step(state: PopulationState, g: Graph, race_matrix: PayoffMatrix2,
               cfg: DynamicsConfig, rng: SplitMix64) -> PopulationState:
    """One asynchronous revision: random focal node imitates a random neighbour.

    Consumes exactly three draws (focal, neighbour, acceptance) regardless of
    outcome.  Mutates and returns ``state``.
    """
    a = rng.next_below(state.n)
    neigh = g.adj[a]
    b = int(neigh[rng.next_below(len(neigh))])
    u = rng.next_u01()
    if state.zealot[a] >= 0:
        return state
    sa = state.strategies[a]
    sb = state.strategies[b]
    if sa == sb:
        return state
    fa = fitness(state, g, race_matrix, a, cfg)
    fb = fitness(state, g, race_matrix, b, cfg)
    if u < fermi_probability(fa, fb, cfg.beta):
        state.strategies[a] = sb
    return state


def sync_generation(state: PopulationState, g: Graph, race_matrix: PayoffMatrix2,
                    cfg: DynamicsConfig, rng: SplitMix64) -> PopulationState:
    """One synchronous generation: every node revises against a snapshot.

    Two draws per node (neighbour, acceptance) in id order, zealots included;
    all accepted revisions commit simultaneously.  Mutates and returns state.
    """
    snapshot = PopulationState(state.strategies.copy(), state.zealot,
                               state.interference)
    new = snapshot.strategies.copy()
    for i in range(state.n):
        neigh = g.adj[i]
        b = int(neigh[rng.next_below(len(neigh))])
        u = rng.next_u01()
        if state.zealot[i] >= 0:
            continue
        si = snapshot.strategies[i]
        sb = snapshot.strategies[b]
        if si == sb:
            continue
        fi = fitness(snapshot, g, race_matrix, i, cfg)
        fb = fitness(snapshot, g, race_matrix, b, cfg)
        if u < fermi_probability(fi, fb, cfg.beta):
            new[i] = sb
    state.strategies[:] = new
    return state
