"""Independent reference computations built on networkx distances.

These deliberately avoid the package's search code: hop sets, distances
and degrees all come from networkx, and every choice is enumerated
rather than searched.
"""

from __future__ import annotations

import itertools
import math

import networkx as nx
import numpy as np

from conftest import to_nx


class Oracle:
    def __init__(self, g):
        self.g = g
        self.h = to_nx(g)
        self.d = {u: dict(r) for u, r in nx.all_pairs_dijkstra_path_length(self.h)}

    def dist(self, u, v):
        return self.d[u].get(v, math.inf)

    def ld(self, leader, members):
        return sum(self.dist(leader, v) for v in set(members) if v != leader)

    # -- MinLD -------------------------------------------------------------

    def nearest(self, v, skill):
        support = sorted(self.g.skill_support(skill))
        best = min(self.dist(v, u) for u in support)
        return best, [u for u in support if self.dist(v, u) == best]

    def min_ld_value(self, task, leaders=None):
        """Exhaustive minimum leader distance when every skill goes to one of
        its nearest holders; all tie combinations are enumerated."""
        skills = [s for s in task.skills if self.g.skill_support(s)]
        best = math.inf
        for v in (self.g.ids if leaders is None else leaders):
            options = [self.nearest(v, s)[1] for s in skills]
            for combo in itertools.product(*options):
                best = min(best, self.ld(v, combo))
        return best

    def skill_sum_value(self, task):
        """min over leaders of the per-skill sum of nearest-holder distances."""
        skills = [s for s in task.skills if self.g.skill_support(s)]
        return min(sum(self.nearest(v, s)[0] for s in skills) for v in self.g.ids)

    # -- TFC ---------------------------------------------------------------

    def candidates(self, task, factor=2.0):
        deg = dict(self.h.degree())
        avg = 2 * self.h.number_of_edges() / self.h.number_of_nodes()
        tset = set(task.skills)
        hd = [v for v in self.g.ids if deg[v] > factor * avg and self.g.skills(v) & tset]
        if hd:
            return sorted(hd, key=lambda v: (-deg[v], v))
        holders = [v for v in self.g.ids if self.g.skills(v) & tset]
        return [min(holders, key=lambda v: (-deg[v], v))] if holders else []

    def tfc_team(self, task, leader, hop_limit=2, fallback="nearest", seed=0):
        g = self.g
        tset = set(task.skills)
        own = g.skills(leader) & tset
        hops = nx.single_source_shortest_path_length(self.h, leader, cutoff=hop_limit)
        for radius in range(1, hop_limit + 1):
            assignment = {s: leader for s in task.skills if s in own}
            open_ = tset - own
            if not open_:
                break
            cands = {u: g.skills(u) & open_ for u, h in hops.items() if 0 < h <= radius}
            cands = {u: r for u, r in cands.items() if r}
            tc = set().union(*cands.values()) if cands else set()
            while tc:
                u = max(cands, key=lambda u: (len(cands[u] & tc), -hops[u], -u))
                for s in cands.pop(u) & tc:
                    assignment[s] = u
                tc -= set(assignment)
            if all(s in assignment for s in task.skills):
                break
        missing = [s for s in task.skills if s not in assignment and g.skill_support(s)]
        if fallback == "nearest":
            for s in missing:
                _, holders = self.nearest(leader, s)
                assignment[s] = min(holders)
        else:
            rng = np.random.default_rng([seed, leader])
            for s in missing:
                support = sorted(g.skill_support(s))
                assignment[s] = support[int(rng.integers(len(support)))]
        return assignment, set(missing)

    def tfc_value(self, task, fallback="nearest", seed=0):
        best = math.inf
        for v in self.candidates(task):
            assignment, _ = self.tfc_team(task, v, fallback=fallback, seed=seed)
            best = min(best, self.ld(v, assignment.values()))
        return best
