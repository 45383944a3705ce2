"""Weighted undirected expert graph and the read-only queries every algorithm uses.

Hop neighbourhoods are unweighted (edge-count BFS); distances are weighted
shortest paths. Unreachable pairs report :data:`UNREACHABLE`.
"""

from __future__ import annotations

import heapq
import math
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

UNREACHABLE = math.inf

_SKILL_RE = re.compile(r"^[^\sA-Z]+$")


class UnknownExpertError(KeyError):
    """Raised when an expert id is not part of the graph."""


class GraphValidationError(ValueError):
    """Raised when graph construction input breaks a structural invariant."""


@dataclass(frozen=True)
class Expert:
    id: int
    name: str
    skills: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "skills", frozenset(self.skills))
        for s in self.skills:
            if not s or not _SKILL_RE.match(s):
                raise GraphValidationError(
                    f"expert {self.id}: skill token {s!r} must be non-empty, "
                    "lowercase and whitespace-free"
                )


@dataclass(frozen=True)
class Community:
    """Named subset of experts, optionally nested inside a parent community."""

    name: str
    members: frozenset[int]
    parent: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))


class ExpertGraph:
    """Immutable weighted undirected graph of experts.

    Parameters
    ----------
    experts : iterable of Expert
        Ids must be unique. They are kept as-is, so an induced subgraph
        shares ids with its parent graph.
    edges : iterable of (u, v, weight)
        Undirected; weight is a non-negative distance. Self-loops and
        parallel edges are rejected.
    """

    def __init__(self, experts: Iterable[Expert], edges: Iterable[tuple[int, int, float]] = ()):
        self._experts: dict[int, Expert] = {}
        for e in experts:
            if e.id in self._experts:
                raise GraphValidationError(f"duplicate expert id {e.id}")
            self._experts[e.id] = e
        self._adj: dict[int, dict[int, float]] = {v: {} for v in self._experts}
        n_edges = 0
        for u, v, w in edges:
            if u not in self._adj or v not in self._adj:
                raise GraphValidationError(f"edge ({u}, {v}) references an unknown expert")
            if u == v:
                raise GraphValidationError(f"self-loop on expert {u}")
            w = float(w)
            if not w >= 0 or math.isinf(w):
                raise GraphValidationError(f"edge ({u}, {v}) has invalid weight {w}")
            if v in self._adj[u]:
                raise GraphValidationError(f"parallel edge ({u}, {v})")
            self._adj[u][v] = w
            self._adj[v][u] = w
            n_edges += 1
        self._n_edges = n_edges

        support: dict[str, set[int]] = {}
        for e in self._experts.values():
            for s in e.skills:
                support.setdefault(s, set()).add(e.id)
        self._support = {s: frozenset(v) for s, v in support.items()}
        self._by_name: dict[str, int] | None = None

    # -- basic accessors ------------------------------------------------

    def __len__(self) -> int:
        return len(self._experts)

    def __contains__(self, v: object) -> bool:
        return v in self._experts

    def __repr__(self) -> str:
        return f"ExpertGraph(|V|={len(self)}, |E|={self._n_edges}, |S|={len(self._support)})"

    @property
    def ids(self) -> list[int]:
        return sorted(self._experts)

    @property
    def n_edges(self) -> int:
        return self._n_edges

    @property
    def skill_universe(self) -> frozenset[str]:
        return frozenset(self._support)

    def expert(self, v: int) -> Expert:
        self._check(v)
        return self._experts[v]

    def experts(self) -> list[Expert]:
        return [self._experts[v] for v in self.ids]

    def skills(self, v: int) -> frozenset[str]:
        self._check(v)
        return self._experts[v].skills

    def name(self, v: int) -> str:
        self._check(v)
        return self._experts[v].name

    def id_of(self, name: str) -> int:
        if self._by_name is None:
            self._by_name = {e.name: e.id for e in self._experts.values()}
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownExpertError(name) from None

    def skill_support(self, skill: str) -> frozenset[int]:
        return self._support.get(skill, frozenset())

    def neighbors(self, v: int) -> Mapping[int, float]:
        """Neighbour -> edge weight. Do not mutate the returned mapping."""
        self._check(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check(v)
        return len(self._adj[v])

    def weight(self, u: int, v: int) -> float | None:
        self._check(u)
        return self._adj[u].get(v)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each undirected edge once, as (u, v, w) with u < v, sorted."""
        for u in self.ids:
            for v in sorted(self._adj[u]):
                if u < v:
                    yield u, v, self._adj[u][v]

    def subgraph(self, members: Iterable[int]) -> ExpertGraph:
        """Induced subgraph on ``members``; ids are preserved."""
        keep = set(members)
        for v in keep:
            self._check(v)
        experts = [self._experts[v] for v in sorted(keep)]
        edges = [(u, v, w) for u, v, w in self.edges() if u in keep and v in keep]
        return ExpertGraph(experts, edges)

    def _check(self, v: int) -> None:
        if v not in self._experts:
            raise UnknownExpertError(v)


# -- shortest paths --------------------------------------------------------


def iter_dijkstra(g: ExpertGraph, source: int) -> Iterator[tuple[int, float]]:
    """Yield ``(node, distance)`` in settle order from ``source``.

    Nodes at equal distance come out in ascending id order. Callers stop
    consuming as soon as they have what they need, so the search never
    explores further than necessary.
    """
    g._check(source)
    adj = g._adj
    dist = {source: 0.0}
    done: set[int] = set()
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        yield u, d
        for v, w in adj[u].items():
            nd = d + w
            if v not in done and nd < dist.get(v, UNREACHABLE):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))


def single_source_distances(
    g: ExpertGraph,
    source: int,
    *,
    targets: Iterable[int] | None = None,
    cutoff: float | None = None,
) -> dict[int, float]:
    """Weighted distances from ``source``.

    With ``targets`` the search stops once all of them are settled; with
    ``cutoff`` nodes farther than it are omitted. Missing keys are
    unreachable (or beyond the cutoff).
    """
    remaining = None if targets is None else set(targets)
    out: dict[int, float] = {}
    for v, d in iter_dijkstra(g, source):
        if cutoff is not None and d > cutoff:
            break
        out[v] = d
        if remaining is not None:
            remaining.discard(v)
            if not remaining:
                break
    return out


def shortest_path_distance(g: ExpertGraph, u: int, v: int) -> float:
    """Weight of the lightest u-v path, 0 for u == v, UNREACHABLE if none."""
    g._check(v)
    for node, d in iter_dijkstra(g, u):
        if node == v:
            return d
    return UNREACHABLE


# -- neighbourhoods and components ----------------------------------------


def hop_distances(g: ExpertGraph, v: int, k: int) -> dict[int, int]:
    """Hop count to every node within ``k`` edges of ``v`` (``v`` excluded)."""
    g._check(v)
    adj = g._adj
    seen = {v: 0}
    frontier = [v]
    for hop in range(1, k + 1):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen[w] = hop
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    del seen[v]
    return seen


def k_hop_neighborhood(g: ExpertGraph, v: int, k: int) -> set[int]:
    """Nodes reachable from ``v`` in at most ``k`` edges, excluding ``v``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return set(hop_distances(g, v, k))


def connected_components(g: ExpertGraph) -> list[frozenset[int]]:
    """Components sorted by size descending, then by smallest member id."""
    seen: set[int] = set()
    comps = []
    for s in g.ids:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g._adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def largest_connected_component(g: ExpertGraph, name: str = "LCC") -> Community:
    comps = connected_components(g)
    return Community(name, comps[0] if comps else frozenset())


# -- degrees -----------------------------------------------------------------


def degree_stats(g: ExpertGraph) -> tuple[dict[int, int], float]:
    """Per-node unweighted degree and the average degree 2|E|/|V| (0 if empty)."""
    degrees = {v: len(g._adj[v]) for v in g.ids}
    d_avg = 2 * g.n_edges / len(g) if len(g) else 0.0
    return degrees, d_avg


def hd_set(g: ExpertGraph, task: Iterable[str], factor: float = 2.0) -> list[int]:
    """High-degree experts holding at least one task skill.

    Degree must exceed ``factor`` times the average degree. Ordered by
    descending degree, then ascending id.
    """
    skills = set(task.skills if hasattr(task, "skills") else task)
    degrees, d_avg = degree_stats(g)
    threshold = factor * d_avg
    out = [
        v for v, d in degrees.items()
        if d > threshold and not g._experts[v].skills.isdisjoint(skills)
    ]
    out.sort(key=lambda v: (-degrees[v], v))
    return out
