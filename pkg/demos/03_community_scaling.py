"""
Why searching inside a community pays off
=========================================

Tasks come from the smallest of three nested communities, so each of
them can be solved at every level. TFC-R runs on each level in turn and
its wall time grows with the size of the graph it searches. The larger
graphs hold more well-connected experts, so their teams are somewhat
cheaper; the community search trades a little leader distance for a
large cut in running time.
"""

from teamform.bench import ExperimentPlan, run_benchmark
from teamform.synthetic import nested_powerlaw_graph

sizes = (500, 2000, 8000)
g, communities = nested_powerlaw_graph(sizes=sizes, names=("inner", "middle", "outer"), seed=2)
graphs = {c.name: g.subgraph(c.members) if c.parent else g for c in communities}

plan = ExperimentPlan(k_range=(8, 8), trials=30, algorithms=("tfc-r", "tfc-n"), task_source="inner", seed=3)
report = run_benchmark(plan, graphs)

for name in graphs:
    r = report.row(name, "tfc-r", 8)
    n = report.row(name, "tfc-n", 8)
    print(f"{name:>6} |V|={len(graphs[name]):>5}  median {r.median_wall_ms:7.2f} ms  "
          f"LD tfc-r {r.leader_distance:.3f}  tfc-n {n.leader_distance:.3f}  "
          f"fallback share {r.random_fraction:.2f}")

inner = report.row("inner", "tfc-r", 8).median_wall_ms
outer = report.row("outer", "tfc-r", 8).median_wall_ms
print(f"whole graph / smallest community time: {outer / inner:.1f}x")
