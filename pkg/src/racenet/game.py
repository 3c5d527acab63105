"""Closed-form layer of the development-race game.

Two firms race toward a breakthrough worth B, reached after W development
rounds at base speed 1.  Each round they independently choose to comply with
safety precautions (SAFE) or skip them (UNSAFE).  Skipping raises the speed to
s >= 1 and avoids the per-round safety cost c, but an unsafe winner triggers a
disaster with probability p_r that forfeits everything.  Safe conduct can leak:
with probability p_fo an unsafe player's shortcut becomes public and the safe
player is not scooped.

Two regimes are analysed.  AS and AU denote the unconditional strategies
"always safe" / "always unsafe" across the whole race.

* EARLY (B >> b): the prize dominates, and region boundaries depend only on
  s and p_r.
* LATE (B ~ 0): the per-round benefit b dominates; boundaries depend on
  b, c, s, p_fo.

Regions (both regimes):

* I   -- safety is collectively preferred and individually selected.
* II  -- EARLY: safety is collectively preferred but the race dynamics favour
  unsafe play (the dilemma zone).  LATE: unsafe development is collectively
  preferred yet safe play is individually favoured (over-regulation zone).
* III -- everything else: unsafe conduct is both preferred and selected
  (EARLY), or the residual zone (LATE).

All functions are pure and operate on :class:`RaceParameters`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import SingularBoundaryError, ValidationError

__all__ = [
    "RaceParameters",
    "PayoffMatrix2",
    "Regime",
    "Region",
    "Preference",
    "Dominance",
    "stage_payoff_matrix",
    "race_payoff_matrix",
    "collective_preference",
    "risk_dominance",
    "early_region_boundaries",
    "late_welfare_boundary",
    "late_risk_dominance_boundary",
    "classify_region",
]


class Regime(Enum):
    EARLY = "early"
    LATE = "late"


class Region(Enum):
    I = "I"
    II = "II"
    III = "III"


class Preference(Enum):
    """Which homogeneous outcome yields the higher collective payoff."""

    SAFE_PREFERRED = "safe"
    UNSAFE_PREFERRED = "unsafe"
    TIE = "tie"


class Dominance(Enum):
    """Risk-dominance comparison between the two unconditional strategies."""

    AS_DOMINANT = "AS"
    AU_DOMINANT = "AU"
    TIE = "tie"


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ValidationError(msg)


@dataclass(frozen=True)
class RaceParameters:
    """Parameters of the development race.

    c     per-round cost of complying with safety precautions (>= 0)
    b     per-round benefit of the intermediate product (> 0)
    B     value of the breakthrough prize (>= 0; 0 recovers the late limit)
    W     number of development rounds at base speed (> 0)
    s     speed multiplier from skipping precautions (>= 1)
    p_fo  probability that unsafe conduct is found out (in [0, 1])
    p_r   probability of disaster when an unsafe firm wins (in [0, 1])
    beta  selection intensity used by the imitation dynamics (>= 0)
    """

    c: float = 1.0
    b: float = 4.0
    B: float = 1.0e4
    W: float = 100.0
    s: float = 1.5
    p_fo: float = 0.5
    p_r: float = 0.5
    beta: float = 1.0

    def __post_init__(self):
        for name in ("c", "b", "B", "W", "s", "p_fo", "p_r", "beta"):
            v = getattr(self, name)
            _check(isinstance(v, (int, float)) and math.isfinite(v),
                   f"{name} must be a finite number, got {v!r}")
        _check(self.c >= 0, f"c must be >= 0, got {self.c}")
        _check(self.b > 0, f"b must be > 0, got {self.b}")
        _check(self.B >= 0, f"B must be >= 0, got {self.B}")
        _check(self.W > 0, f"W must be > 0, got {self.W}")
        _check(self.s >= 1, f"s must be >= 1, got {self.s}")
        _check(0.0 <= self.p_fo <= 1.0, f"p_fo must be in [0, 1], got {self.p_fo}")
        _check(0.0 <= self.p_r <= 1.0, f"p_r must be in [0, 1], got {self.p_r}")
        _check(self.beta >= 0, f"beta must be >= 0, got {self.beta}")


class PayoffMatrix2:
    """An immutable 2x2 payoff matrix.

    Row index is the focal player's strategy, column the co-player's, in the
    fixed order (SAFE, UNSAFE) -- equivalently (AS, AU) for race payoffs.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = np.asarray(entries, dtype=np.float64)
        if arr.shape != (2, 2):
            raise ValidationError(f"payoff matrix must be 2x2, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("payoff matrix entries must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        self.entries = arr

    def __getitem__(self, idx):
        return self.entries[idx]

    def __eq__(self, other):
        if not isinstance(other, PayoffMatrix2):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __repr__(self):
        return f"PayoffMatrix2({self.entries.tolist()!r})"


def stage_payoff_matrix(p: RaceParameters) -> PayoffMatrix2:
    """Expected per-round payoff of one development round.

    Rows/columns are (SAFE, UNSAFE).  A safe pair splits the round benefit b
    after paying c each.  Against an unsafe co-player, a safe player gets the
    speed-weighted share b/(s+1) unless the shortcut is found out (probability
    p_fo), in which case the safe player collects the whole b.  An unsafe
    player against safe keeps the complementary share when not found out, and
    an unsafe pair splits b but each loses everything if both are found out.
    """
    c, b, s, p_fo = p.c, p.b, p.s, p.p_fo
    safe_safe = -c + b / 2
    safe_unsafe = -c + (1 - p_fo) * b / (s + 1) + p_fo * b
    unsafe_safe = (1 - p_fo) * s * b / (s + 1)
    unsafe_unsafe = (1 - p_fo**2) * b / 2
    return PayoffMatrix2([[safe_safe, safe_unsafe], [unsafe_safe, unsafe_unsafe]])


def race_payoff_matrix(p: RaceParameters) -> PayoffMatrix2:
    """Expected payoff of the whole race, per round, for (AS, AU).

    An AS pair shares the prize at base speed: B/(2W) on top of the stage
    payoff.  An AU player reaches the prize s times faster (sB/W alone,
    sB/(2W) against another AU) but any unsafe winner forfeits everything
    with probability p_r.  Against an unsafe opponent an AS player sees no
    share of the prize.
    """
    st = stage_payoff_matrix(p).entries
    B, W, s, p_r = p.B, p.W, p.s, p.p_r
    surv = 1 - p_r
    as_as = B / (2 * W) + st[0, 0]
    as_au = st[0, 1]
    au_as = surv * (s * B / W + st[1, 0])
    au_au = surv * (s * B / (2 * W) + st[1, 1])
    return PayoffMatrix2([[as_as, as_au], [au_as, au_au]])


def collective_preference(p: RaceParameters) -> Preference:
    """Compare homogeneous outcomes: payoff of (AS, AS) vs (AU, AU)."""
    m = race_payoff_matrix(p).entries
    if m[0, 0] > m[1, 1]:
        return Preference.SAFE_PREFERRED
    if m[0, 0] < m[1, 1]:
        return Preference.UNSAFE_PREFERRED
    return Preference.TIE


def risk_dominance(p: RaceParameters) -> Dominance:
    """Risk-dominance for the 2x2 race game: compare row sums.

    AS risk-dominates AU iff M[AS,AS] + M[AS,AU] > M[AU,AS] + M[AU,AU];
    for pairwise-comparison dynamics the risk-dominant strategy is the one
    selected in large well-mixed populations.
    """
    m = race_payoff_matrix(p).entries
    sum_as = m[0, 0] + m[0, 1]
    sum_au = m[1, 0] + m[1, 1]
    if sum_as > sum_au:
        return Dominance.AS_DOMINANT
    if sum_as < sum_au:
        return Dominance.AU_DOMINANT
    return Dominance.TIE


def early_region_boundaries(s: float) -> tuple[float, float]:
    """Region-II bounds on p_r in the early regime: (1 - 1/s, 1 - 1/(3s)).

    Valid for s >= 1.  Below the lower bound unsafe play is collectively
    preferred (region III); above the upper bound safety is both preferred
    and selected (region I); the closed interval between them is region II.
    """
    _check(isinstance(s, (int, float)) and math.isfinite(s) and s >= 1,
           f"s must be a finite number >= 1, got {s}")
    return (1 - 1 / s, 1 - 1 / (3 * s))


def late_welfare_boundary(p: RaceParameters) -> float:
    """p_r threshold above which safety is collectively preferred as B -> 0.

    Equals 1 - (b - 2c) / (b (1 - p_fo^2)).  Undefined at p_fo = 1, where the
    unsafe-unsafe stage payoff vanishes and the comparison degenerates.
    """
    if p.p_fo >= 1:
        raise SingularBoundaryError("late welfare boundary is undefined at p_fo = 1")
    return 1 - (p.b - 2 * p.c) / (p.b * (1 - p.p_fo**2))


def late_risk_dominance_boundary(p: RaceParameters) -> float:
    """Closed-form p_r threshold of risk dominance in the late regime.

    Equals (4c(s+1) + 2b(s-1)) / (b(1+3s)).  This form ignores the found-out
    channel and therefore matches :func:`risk_dominance` at B = 0 only for
    p_fo = 0; region classification always uses the explicit comparison.
    """
    return (4 * p.c * (p.s + 1) + 2 * p.b * (p.s - 1)) / (p.b * (1 + 3 * p.s))


def classify_region(p: RaceParameters, regime: Regime) -> Region:
    """Classify parameters into region I, II, or III for the given regime.

    EARLY uses the closed-form p_r interval from
    :func:`early_region_boundaries`; boundary values (a tie) fall in II.
    LATE evaluates :func:`collective_preference` and :func:`risk_dominance`
    at B = 0; ties resolve toward the safety-favouring region.
    """
    if regime is Regime.EARLY:
        lo, hi = early_region_boundaries(p.s)
        if p.p_r > hi:
            return Region.I
        if p.p_r >= lo:
            return Region.II
        return Region.III
    if regime is Regime.LATE:
        if p.p_fo >= 1:
            raise SingularBoundaryError("late regions are undefined at p_fo = 1")
        p0 = replace(p, B=0.0)
        safe_preferred = collective_preference(p0) is not Preference.UNSAFE_PREFERRED
        as_dominant = risk_dominance(p0) is not Dominance.AU_DOMINANT
        if safe_preferred and as_dominant:
            return Region.I
        if as_dominant:
            return Region.II
        return Region.III
    raise ValidationError(f"unknown regime: {regime!r}")
