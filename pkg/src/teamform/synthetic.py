"""Synthetic collaboration graphs with nested communities.

The graph grows by preferential attachment, so the first ``n`` nodes always
induce a connected power-law graph of their own. That gives nested
communities (smallest inside middle inside whole) the way a single venue
sits inside a research area inside all of DBLP.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .graph import Community, Expert, ExpertGraph


def preferential_attachment_edges(n: int, m: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Barabasi-Albert growth: node i links to m distinct earlier nodes."""
    if n <= m:
        raise ValueError("need more nodes than links per node")
    edges = [(u, v) for u in range(m + 1) for v in range(u + 1, m + 1)]  # seed clique
    # every endpoint appears once per incident edge -> sampling is degree-proportional
    ends = np.empty(2 * (len(edges) + (n - m - 1) * m), dtype=np.int64)
    k = 0
    for u, v in edges:
        ends[k], ends[k + 1] = u, v
        k += 2
    for new in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(int(ends[rng.integers(k)]))
        for t in sorted(targets):
            edges.append((t, new))
            ends[k], ends[k + 1] = t, new
            k += 2
    return edges


def nested_powerlaw_graph(
    sizes: Sequence[int] = (1000, 5000, 25000),
    names: Sequence[str] = ("VLDB", "DB", "DBLP"),
    m: int = 3,
    n_skills: int = 160,
    skills_per_expert: tuple[int, int] = (3, 7),
    skill_exponent: float = 0.6,
    seed: int = 0,
) -> tuple[ExpertGraph, list[Community]]:
    """Power-law expert graph and its nested communities (smallest first).

    Skills follow a Zipf-like popularity law over ``n_skills`` tokens. Edge
    weights are Jaccard distances over simulated publication sets: each
    expert publishes in proportion to their degree and linked experts share
    a few papers.
    """
    sizes = list(sizes)
    if sorted(sizes) != sizes or len(sizes) != len(names):
        raise ValueError("sizes must be ascending and match names")
    rng = np.random.default_rng(seed)
    n = sizes[-1]
    pairs = preferential_attachment_edges(n, m, rng)

    degree = np.zeros(n, dtype=np.int64)
    for u, v in pairs:
        degree[u] += 1
        degree[v] += 1
    pubs = degree + rng.poisson(3, size=n) + 3
    weights = []
    for u, v in pairs:
        joint = min(3 + int(rng.poisson(0.5)), pubs[u], pubs[v])
        weights.append(1.0 - joint / (pubs[u] + pubs[v] - joint))

    vocab = np.array([f"s{i:04d}" for i in range(n_skills)])
    popularity = 1.0 / np.arange(1, n_skills + 1) ** skill_exponent
    popularity /= popularity.sum()
    lo, hi = skills_per_expert
    experts = []
    for v in range(n):
        k = int(rng.integers(lo, hi + 1))
        chosen = rng.choice(n_skills, size=k, replace=False, p=popularity)
        experts.append(Expert(v, f"expert{v:05d}", frozenset(vocab[chosen].tolist())))

    g = ExpertGraph(experts, [(u, v, w) for (u, v), w in zip(pairs, weights)])
    communities = []
    for i, (size, name) in enumerate(zip(sizes, names)):
        parent = names[i + 1] if i + 1 < len(names) else None
        communities.append(Community(name, frozenset(range(size)), parent))
    return g, communities
