"""
Degree, components and skill coverage of a power-law graph
===========================================================

A synthetic collaboration graph grows by preferential attachment, so a
few experts collaborate with very many others. Within two hops those
hubs see most of the skills their community holds, and this is what
lets a team search stay local.
"""

import numpy as np

from teamform.analysis import (
    collaborator_ratio,
    cumulative_skill_coverage,
    degree_distribution,
    network_statistics,
)
from teamform.graph import degree_stats
from teamform.synthetic import nested_powerlaw_graph

g, communities = nested_powerlaw_graph(sizes=(1000, 3000), names=("small", "large"), seed=1)
print(network_statistics(g))

# Degree distribution: on log-log axes the tail is close to a line.
series = degree_distribution(g)
x, count = np.array(series.x), np.array(series.count)
slope = np.polyfit(np.log(x[count > 2]), np.log(count[count > 2]), 1)[0]
print(f"{len(series)} distinct degrees, max {x.max()}, rough log-log slope {slope:.2f}")

high, low = collaborator_ratio(g)
print(f"high collaborators (degree > 2 x average): {high}, others: {low}")

# Cumulative skill coverage inside the small community.
small = communities[0]
table = cumulative_skill_coverage(g, small, hops_max=3)
_, d_avg = degree_stats(g.subgraph(small.members))
for label, pred in (("degree <= avg", lambda d: d <= d_avg), ("degree > avg", lambda d: d > d_avg)):
    row = table.mean_for(pred)
    print(f"{label:>14}: " + "  ".join(f"hop{h} {v:.2f}" for h, v in enumerate(row)))
