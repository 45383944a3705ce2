"""
Forming a team on the 20-expert example graph
==============================================

Every algorithm gets the same five-skill task. The leader-distance
methods (TFC and MinLD) and the sum-distance method (MinSD) end up with
different leaders, so the three cost measures disagree on which team is
best.
"""

from teamform import ALGORITHMS, AlgorithmConfig, Task, evaluate, load_graph, toy_graph_prefix

g = load_graph(toy_graph_prefix())
print(g)

# Task: one holder for each of the five skills.
task = Task.parse("a,b,c,d,e")
for s in task:
    print(s, sorted(g.name(v) for v in g.skill_support(s)))

# Run all six algorithms and compare their costs side by side.
print(f"\n{'algorithm':<11} {'leader':<7} {'members':<12} {'LD':>4} {'SD':>4} {'diam':>5}")
for name, algo in ALGORITHMS.items():
    team = algo(g, task, AlgorithmConfig(rng_seed=0))
    rep = evaluate(g, team, task)
    members = ",".join(sorted(g.name(v) for v in team.members))
    print(f"{name:<11} {g.name(team.leader):<7} {members:<12} "
          f"{rep.leader_distance:>4g} {rep.sum_distance:>4g} {rep.diameter:>5g}")

# TFC looks for experts around a high-degree leader first. Here C reaches
# A and S directly, so the fallback step never runs.
team = ALGORITHMS["tfc-n"](g, task, AlgorithmConfig())
print("\nassignment:", {s: g.name(team.assignment[s]) for s in task})
print("filled by fallback:", sorted(team.fallback) or "none")
