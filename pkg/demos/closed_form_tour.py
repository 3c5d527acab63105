"""
Tour of the closed-form layer
=============================

Payoff matrices, regime boundaries, and region classification, with no
simulation involved.  Run it; it prints a few small tables.
"""

from dataclasses import replace

from racenet import (RaceParameters, Regime, classify_region,
                     early_region_boundaries, late_risk_dominance_boundary,
                     late_welfare_boundary, race_payoff_matrix,
                     stage_payoff_matrix)

params = RaceParameters(c=1, b=4, B=1e4, W=100, s=1.5, p_fo=0.5, p_r=0.5)

# the per-round game and the full race averaged over W rounds
stage = stage_payoff_matrix(params)
race = race_payoff_matrix(params)
print("stage payoffs (rows/cols = safe, unsafe):")
print(f"  [[{stage[0, 0]:g}, {stage[0, 1]:g}], [{stage[1, 0]:g}, {stage[1, 1]:g}]]")
print("race payoffs with the prize folded in:")
print(f"  [[{race[0, 0]:g}, {race[0, 1]:g}], [{race[1, 0]:g}, {race[1, 1]:g}]]")
print()

# in the early regime the dilemma zone depends only on the speed multiplier
print("early regime: risk interval where the dilemma lives, by speed")
print("   s     lower    upper")
for s in (1.2, 1.5, 2.0, 3.0, 5.0):
    lo, hi = early_region_boundaries(s)
    print(f"  {s:3.1f}   {lo:.4f}   {hi:.4f}")
print()

print("late regime: welfare and risk-dominance thresholds on p_r")
print("  p_fo   welfare   risk-dominance (s=1.5)")
riskdom = late_risk_dominance_boundary(params)
for p_fo in (0.0, 0.2, 0.4, 0.6, 0.8):
    welfare = late_welfare_boundary(replace(params, p_fo=p_fo))
    print(f"  {p_fo:3.1f}   {welfare:7.4f}   {riskdom:.4f}")
print()

# region labels across the risk axis, both regimes
print("region by disaster risk (early at s=1.5, late at p_fo=0.6)")
print("  p_r    early   late")
for p_r in (0.1, 0.3, 0.5, 0.7, 0.9):
    early = classify_region(replace(params, p_r=p_r), Regime.EARLY)
    late = classify_region(replace(params, p_fo=0.6, p_r=p_r), Regime.LATE)
    print(f"  {p_r:3.1f}    {early.value:3s}     {late.value}")
