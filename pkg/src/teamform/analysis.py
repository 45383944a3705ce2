"""Network diagnostics: degree and component-size distributions, the
high/low collaborator split, and cumulative hop-wise skill coverage."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .graph import Community, ExpertGraph, connected_components, degree_stats, hop_distances


@dataclass(frozen=True)
class DistributionSeries:
    """Frequency table: ``x`` ascending and distinct, ``count`` >= 1."""

    x: tuple[int, ...]
    count: tuple[int, ...]

    @classmethod
    def from_values(cls, values) -> DistributionSeries:
        c = Counter(values)
        xs = tuple(sorted(c))
        return cls(xs, tuple(c[x] for x in xs))

    def __len__(self):
        return len(self.x)

    def rows(self):
        return list(zip(self.x, self.count))


def degree_distribution(g: ExpertGraph) -> DistributionSeries:
    degrees, _ = degree_stats(g)
    return DistributionSeries.from_values(degrees.values())


def component_size_distribution(g: ExpertGraph) -> DistributionSeries:
    return DistributionSeries.from_values(len(c) for c in connected_components(g))


def collaborator_ratio(g: ExpertGraph, factor: float = 2.0) -> tuple[int, int]:
    """(high, low): experts with degree above ``factor`` x average, and the rest."""
    degrees, d_avg = degree_stats(g)
    high = sum(d > factor * d_avg for d in degrees.values())
    return high, len(g) - high


def network_statistics(g: ExpertGraph) -> dict[str, float]:
    """|V|, |E|, |S|, average degree and |S|/|E|."""
    _, d_avg = degree_stats(g)
    n_skills = len(g.skill_universe)
    return {
        "V": len(g),
        "E": g.n_edges,
        "S": n_skills,
        "d_avg": d_avg,
        "S_per_E": n_skills / g.n_edges if g.n_edges else 0.0,
    }


STATISTICS_HEADER = ("network", "V", "E", "S", "d_avg", "S_per_E")


def statistics_rows(graphs) -> list[tuple[str, ...]]:
    """Rows of the network-statistics table for named graphs, header first."""
    rows = [STATISTICS_HEADER]
    for name, g in graphs.items():
        st = network_statistics(g)
        rows.append((name, str(st["V"]), str(st["E"]), str(st["S"]), f"{st['d_avg']:.4f}", f"{st['S_per_E']:.4f}"))
    return rows


@dataclass(frozen=True)
class CoverageTable:
    """Cumulative skill coverage.

    ``per_node[v]`` holds the coverage fraction at hop 0..hops_max;
    ``per_degree`` maps degree -> mean of those rows over nodes of that
    degree.
    """

    hops_max: int
    per_node: dict[int, tuple[float, ...]]
    degree: dict[int, int]
    per_degree: dict[int, tuple[float, ...]]

    def mean_for(self, predicate) -> np.ndarray:
        """Mean coverage row over nodes whose degree satisfies ``predicate``."""
        rows = [r for v, r in self.per_node.items() if predicate(self.degree[v])]
        if not rows:
            return np.full(self.hops_max + 1, np.nan)
        return np.mean(np.array(rows), axis=0)


def cumulative_skill_coverage(
    g: ExpertGraph,
    community: Community | None = None,
    hops_max: int = 3,
) -> CoverageTable:
    """Fraction of the community's skill union seen within 0..hops_max hops.

    Computed on the community's induced subgraph (the whole graph when
    ``community`` is None); degrees are taken in that subgraph.
    """
    sub = g if community is None else g.subgraph(v for v in community.members if v in g)
    universe = sub.skill_universe
    if not universe:
        raise ValueError("community has no skills")
    n = len(universe)
    degrees, _ = degree_stats(sub)
    per_node = {}
    for v in sub.ids:
        by_hop = [set() for _ in range(hops_max + 1)]
        by_hop[0] |= sub.skills(v)
        for u, h in hop_distances(sub, v, hops_max).items():
            by_hop[h] |= sub.skills(u)
        seen, row = set(), []
        for layer in by_hop:
            seen |= layer
            row.append(len(seen) / n)
        per_node[v] = tuple(row)

    grouped: dict[int, list[tuple[float, ...]]] = {}
    for v, row in per_node.items():
        grouped.setdefault(degrees[v], []).append(row)
    per_degree = {
        d: tuple(float(x) for x in np.mean(np.array(rows), axis=0))
        for d, rows in sorted(grouped.items())
    }
    return CoverageTable(hops_max, per_node, degrees, per_degree)
