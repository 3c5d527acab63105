"""Pin the best-connected nodes to safety and watch the population follow.

A zealot never imitates anyone.  Converting even a few percent of the
highest-degree nodes on a clustered scale-free graph flips the bulk of the
population to safe play; the inclusive and exclusive columns show the
effect with and without the pinned nodes counted.
"""

from racenet import (DynamicsConfig, NetworkSpec, RaceParameters,
                     RunProtocol, ZealotOrder, aggregate, zealot_progression)

params = RaceParameters(c=1, b=4, B=1e4, W=100, s=1.5, p_fo=0.5, p_r=0.5)
cfg = DynamicsConfig(normalized=False, beta=1.0)
protocol = RunProtocol(generations=1000, window=200, replicates=5,
                       network_instances=1, master_seed=2)

g = NetworkSpec("dms", nodes=300, m=2, seed=11).instance(0)
fractions = [0.0, 0.01, 0.02, 0.05, 0.10]

records = zealot_progression(g, params, cfg, protocol, fractions,
                             order=ZealotOrder.DESCENDING)
cells = aggregate(records)

print(f"DMS graph, {g.n} nodes, max degree {g.max_degree}")
print("fraction  zealots  AU(all)  AU(non-zealots)")
counts = {r.cell_index: r.n_zealots for r in records}
for i, (f, cell) in enumerate(zip(fractions, cells)):
    print(f"  {f:5.2f}   {counts[i]:5d}    {cell.mean_au_all:.3f}    "
          f"{cell.mean_au_nonzealot:.3f}")
