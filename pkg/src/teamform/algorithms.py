"""Team formation algorithms.

Community based: :func:`tfc_r`, :func:`tfc_n` and the multi-team driver
:func:`dc`. Skill-centric baselines: :func:`rarest_first`, :func:`min_ld`
(``leaders="all"`` or the high-degree restriction ``leaders="hd"``) and
:func:`min_sd`.

Every function returns a :class:`~teamform.metrics.Team`. Skills with no
supporting expert are left unassigned, so the result simply reports
coverage below 1 instead of raising.
"""

from __future__ import annotations

import heapq
import math
from itertools import combinations
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import (
    UNREACHABLE,
    Community,
    ExpertGraph,
    hd_set,
    hop_distances,
    single_source_distances,
)
from .metrics import Task, Team

TIE_BREAK_RULES = ("coverage-hop-id",)
VARIANTS = ("tfc-r", "tfc-n")


@dataclass(frozen=True)
class AlgorithmConfig:
    rng_seed: int = 0
    hop_limit: int = 2
    hd_degree_factor: float = 2.0
    tie_break: str = "coverage-hop-id"
    variant: str = "tfc-r"  # which TFC flavour dc() runs

    def __post_init__(self):
        if self.hop_limit < 1:
            raise ValueError(f"hop_limit must be >= 1, got {self.hop_limit}")
        if not self.hd_degree_factor > 0:
            raise ValueError(f"hd_degree_factor must be > 0, got {self.hd_degree_factor}")
        if self.tie_break not in TIE_BREAK_RULES:
            raise ValueError(f"unknown tie_break rule {self.tie_break!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown TFC variant {self.variant!r}")


# -- TFC ----------------------------------------------------------------------


@dataclass
class TfcSearchState:
    """Bookkeeping for one leader's pass over one hop radius."""

    leader: int
    assignment: dict[str, int]
    not_yet_covered: list[str]
    covered_in_nbhd: set[str] = field(default_factory=set)
    candidates: dict[int, tuple[frozenset[str], int]] = field(default_factory=dict)

    def greedy_fill(self) -> None:
        # argmax coverage of the still-open neighbourhood skills, then fewer hops, then lower id.
        # Only the best expert per distinct skill set can ever win, so search those.
        reps: dict[frozenset[str], tuple[int, int]] = {}
        for u, (rel, h) in self.candidates.items():
            cur = reps.get(rel)
            if cur is None or (h, u) < cur:
                reps[rel] = (h, u)
        # scanning by shrinking skill-set size lets the search stop once no
        # remaining set can beat the best gain found so far
        order = sorted(reps.items(), key=lambda kv: -len(kv[0]))
        tc = self.covered_in_nbhd
        while tc:
            best_key, best_i = None, -1
            for i, (rel, (h, u)) in enumerate(order):
                if best_key is not None and len(rel) < best_key[0]:
                    break
                key = (len(rel & tc), -h, -u)
                if best_key is None or key > best_key:
                    best_key, best_i = key, i
            rel, (h, e) = order.pop(best_i)
            del self.candidates[e]
            gain = rel & tc
            for s in gain:
                self.assignment[s] = e
            tc -= gain
        self.not_yet_covered = [s for s in self.not_yet_covered if s not in self.assignment]


def leader_candidates(g: ExpertGraph, task: Task, cfg: AlgorithmConfig = AlgorithmConfig()) -> list[int]:
    """The HD set, or the single highest-degree skill holder when it is empty."""
    hd = hd_set(g, task, cfg.hd_degree_factor)
    if hd:
        return hd
    tset = set(task.skills)
    holders = [v for v in g.ids if not g.skills(v).isdisjoint(tset)]
    if not holders:
        return []
    return [min(holders, key=lambda v: (-g.degree(v), v))]


def leader_rng(seed: int, leader: int) -> np.random.Generator:
    """Independent stream per (seed, leader); leaders can be evaluated in any order."""
    return np.random.default_rng([seed, leader])


def _holders_within(g: ExpertGraph, v: int, hop: int, skills: frozenset[str]) -> dict[int, int]:
    """Hop distance of every holder of ``skills`` within ``hop`` edges of ``v``.

    Equivalent to filtering the hop neighbourhood, but for radius <= 2 it
    probes the (usually much smaller) support lists instead: a holder is
    two hops away iff it shares a neighbour with ``v``.
    """
    adj = g._adj
    near = adj[v]
    holders = set().union(*(g.skill_support(s) for s in skills)) if skills else set()
    holders.discard(v)
    if hop <= 2 and len(holders) < sum(len(adj[u]) for u in near):
        out = {}
        for u in holders:
            if u in near:
                out[u] = 1
            elif hop == 2 and not near.keys().isdisjoint(adj[u]):
                out[u] = 2
        return out
    return {u: h for u, h in hop_distances(g, v, hop).items() if u in holders}


def _neighbourhood_search(g: ExpertGraph, task: Task, leader: int, cfg: AlgorithmConfig) -> TfcSearchState:
    tset = frozenset(task.skills)
    own = g.skills(leader) & tset
    open_skills = tset - own
    within = _holders_within(g, leader, cfg.hop_limit, open_skills) if open_skills else {}
    state = None
    for hop in range(1, cfg.hop_limit + 1):
        state = TfcSearchState(
            leader=leader,
            assignment={s: leader for s in task.skills if s in own},
            not_yet_covered=[s for s in task.skills if s not in own],
        )
        if not state.not_yet_covered:
            break
        for u, h in within.items():
            if h <= hop:
                rel = g.skills(u) & open_skills
                state.candidates[u] = (rel, h)
                state.covered_in_nbhd |= rel
        if hop < cfg.hop_limit and state.covered_in_nbhd != open_skills:
            continue  # this radius cannot finish the task; its partial result would be discarded
        state.greedy_fill()
        if not state.not_yet_covered:
            break
    return state


def _random_fill(g: ExpertGraph, state: TfcSearchState, seed: int) -> set[str]:
    filled = set()
    if state.not_yet_covered:
        rng = leader_rng(seed, state.leader)
        for s in state.not_yet_covered:
            support = sorted(g.skill_support(s))
            if support:
                state.assignment[s] = support[int(rng.integers(len(support)))]
                filled.add(s)
    return filled


def _nearest_fill(g: ExpertGraph, state: TfcSearchState, bound: float = UNREACHABLE) -> tuple[set[str], float]:
    """Give each open skill its holder nearest the leader; return (filled, LD).

    One Dijkstra pass both finds the holders and sums the leader distance.
    LD comes back UNREACHABLE as soon as it provably reaches ``bound``.
    """
    leader, assignment = state.leader, state.assignment
    open_skills = {s for s in state.not_yet_covered if g.skill_support(s)}
    pending = set(assignment.values()) - {leader}
    filled: set[str] = set()
    total, seen = 0.0, {leader}
    adj, experts = g._adj, g._experts
    dist = {leader: 0.0}
    done: set[int] = set()
    heap = [(0.0, leader)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if u in done:
            continue
        if not pending and not open_skills:
            return filled, total
        if total + max(len(pending), 1 if open_skills else 0) * d >= bound:
            return filled, UNREACHABLE
        done.add(u)
        gain = experts[u].skills & open_skills
        if gain:
            for s in gain:
                assignment[s] = u
            filled |= gain
            open_skills -= gain
            if u not in seen and u not in pending:
                total += d
                seen.add(u)
        if u in pending:
            pending.discard(u)
            seen.add(u)
            total += d
        for w, wt in adj[u].items():
            nd = d + wt
            if nd < dist.get(w, UNREACHABLE):
                dist[w] = nd
                push(heap, (nd, w))
    if not pending and not open_skills:
        return filled, total
    for s in open_skills:  # holders exist but none is reachable
        assignment[s] = min(g.skill_support(s))
        filled.add(s)
    return filled, UNREACHABLE


def tfc_candidate(
    g: ExpertGraph,
    task: Task,
    leader: int,
    cfg: AlgorithmConfig = AlgorithmConfig(),
    fallback: str = "random",
) -> Team:
    """Team grown around one leader: hop-limited greedy cover plus fallback.

    The leader's own task skills are assigned to the leader up front. The
    neighbourhood search restarts for every hop radius up to
    ``cfg.hop_limit`` and stops as soon as nothing is left uncovered.
    Skills still open afterwards go to a random holder (``"random"``) or
    to the holder nearest the leader (``"nearest"``).
    """
    return _candidate_with_ld(g, task, leader, cfg, fallback)[0]


def _candidate_with_ld(g, task, leader, cfg, fallback, bound=UNREACHABLE) -> tuple[Team, float]:
    state = _neighbourhood_search(g, task, leader, cfg)
    if fallback == "random":
        filled = _random_fill(g, state, cfg.rng_seed)
        team = Team(leader, state.assignment, filled)
        return team, bounded_leader_distance(g, leader, team.members, bound)
    if fallback == "nearest":
        filled, ld = _nearest_fill(g, state, bound)
        return Team(leader, state.assignment, filled), ld
    raise ValueError(f"unknown fallback {fallback!r}")


def bounded_leader_distance(g: ExpertGraph, leader: int, members: Iterable[int], bound: float = UNREACHABLE) -> float:
    """Leader distance, or UNREACHABLE as soon as it provably reaches ``bound``."""
    others = set(members) - {leader}
    if not others:
        return 0.0
    g._check(leader)
    adj = g._adj
    total, left = 0.0, len(others)
    dist = {leader: 0.0}
    done = set()
    heap = [(0.0, leader)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if u in done:
            continue
        if total + left * d >= bound:
            return UNREACHABLE
        done.add(u)
        if u in others:
            total += d
            left -= 1
            if not left:
                return total
        # a node first reached at distance nd can only matter if a member
        # behind it still fits under the bound next to the other open members
        reach = bound - total - (left - 1) * d
        for w, wt in adj[u].items():
            nd = d + wt
            if nd < reach and nd < dist.get(w, UNREACHABLE):
                dist[w] = nd
                push(heap, (nd, w))
    return UNREACHABLE


def _tfc(g: ExpertGraph, task: Task, cfg: AlgorithmConfig, fallback: str) -> Team:
    best, best_ld = None, UNREACHABLE
    for v in leader_candidates(g, task, cfg):
        team, ld = _candidate_with_ld(g, task, v, cfg, fallback, best_ld)
        if best is None or ld < best_ld:
            best, best_ld = team, ld
    return best if best is not None else Team(None)


def tfc_r(g: ExpertGraph, task: Task, cfg: AlgorithmConfig = AlgorithmConfig()) -> Team:
    """TFC with random fallback experts, seeded by ``cfg.rng_seed``."""
    return _tfc(g, task, cfg, "random")


def tfc_n(g: ExpertGraph, task: Task, cfg: AlgorithmConfig = AlgorithmConfig()) -> Team:
    """TFC whose fallback takes the holder nearest the leader (deterministic)."""
    return _tfc(g, task, cfg, "nearest")


# -- DC -----------------------------------------------------------------------


def required_skill_count(task: Task, threshold: float) -> int:
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    return math.ceil(threshold * len(task) - 1e-9)


def is_desirable(g: ExpertGraph, community: Community, task: Task, threshold: float) -> bool:
    need = required_skill_count(task, threshold)
    tset = set(task.skills)
    have = set()
    for v in community.members:
        if v in g:
            have |= g.skills(v) & tset
            if len(have) >= need:
                return True
    return len(have) >= need


def dc(
    g: ExpertGraph,
    communities: Sequence[Community],
    task: Task,
    threshold: float = 0.9,
    cfg: AlgorithmConfig = AlgorithmConfig(),
    subgraphs: dict[str, ExpertGraph] | None = None,
) -> list[tuple[Community, Team]]:
    """One team per desirable community, found on its induced subgraph.

    ``subgraphs`` is an optional cache keyed by community name, useful when
    the same communities serve many tasks.
    """
    algo = tfc_n if cfg.variant == "tfc-n" else tfc_r
    out = []
    for c in communities:
        if not is_desirable(g, c, task, threshold):
            continue
        if subgraphs is not None and c.name in subgraphs:
            sub = subgraphs[c.name]
        else:
            sub = g.subgraph(v for v in c.members if v in g)
            if subgraphs is not None:
                subgraphs[c.name] = sub
        out.append((c, algo(sub, task, cfg)))
    return out


# -- skill-centric baselines ------------------------------------------------


def _supported(g: ExpertGraph, task: Task) -> list[str]:
    return [s for s in task.skills if g.skill_support(s)]


def _nearest_holders(
    g: ExpertGraph,
    source: int,
    skills: Sequence[str],
    bound: float = UNREACHABLE,
) -> tuple[dict[str, float], dict[str, list[int]]] | None:
    """Distance to, and all equally near holders of, each skill from ``source``.

    Returns None once some skill provably sits at distance >= ``bound``.
    Skills whose holders are all unreachable get distance UNREACHABLE and
    their smallest-id holder.
    """
    wanted = frozenset(skills)
    need = set(wanted)
    dist: dict[str, float] = {}
    holders: dict[str, list[int]] = {}
    far = 0.0
    g._check(source)
    adj, experts = g._adj, g._experts
    best = {source: 0.0}
    heap = [(0.0, source)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if d > best[u]:
            continue
        if need and d >= bound:
            return None
        if not need and d > far:
            break
        for s in experts[u].skills & wanted:
            if s in need:
                need.discard(s)
                dist[s] = d
                holders[s] = [u]
                far = max(far, d)
            elif dist[s] == d:
                holders[s].append(u)
        for w, wt in adj[u].items():
            nd = d + wt
            if nd < best.get(w, UNREACHABLE):
                best[w] = nd
                push(heap, (nd, w))
    if need:
        if bound < UNREACHABLE:
            return None
        for s in need:
            dist[s] = UNREACHABLE
            holders[s] = [min(g.skill_support(s))]
    return dist, holders


def _assign(g: ExpertGraph, skills: Sequence[str], holders: dict[str, list[int]], prefer_multi: bool) -> dict[str, int]:
    assignment = {}
    for i, s in enumerate(skills):
        if prefer_multi:
            remaining = set(skills[i:])
            u = min(holders[s], key=lambda u: (-len(g.skills(u) & remaining), u))
        else:
            u = min(holders[s])
        assignment[s] = u
    return assignment


_COVER_BUDGET = 50_000  # combinations tried per distance group before settling for greedy


def _fewest_holders(g: ExpertGraph, skills: list[str], holders: dict[str, list[int]]) -> dict[str, int]:
    """Assign ``skills`` (all at one distance from the leader) to as few of
    their tied holders as possible.

    Holders are equally far, so the fewest distinct holders gives the
    smallest leader distance. Exact by increasing cover size; among
    minimum covers the smallest sorted id tuple wins, and each skill goes
    to the lowest-id chosen holder. Very large tie groups fall back to the
    greedy most-skills-first rule.
    """
    want = set(skills)
    offer: dict[frozenset[str], int] = {}
    for s in skills:
        for u in holders[s]:
            cov = frozenset(g.skills(u) & want)
            if cov not in offer or u < offer[cov]:
                offer[cov] = u
    # a holder whose skills are a strict subset of another's never helps
    useful = sorted(u for cov, u in offer.items() if not any(cov < other for other in offer))
    cover = None
    tried = 0
    for r in range(1, len(skills) + 1):
        for combo in combinations(useful, r):
            tried += 1
            if set().union(*(g.skills(u) & want for u in combo)) == want:
                cover = combo
                break
            if tried > _COVER_BUDGET:
                break
        if cover is not None or tried > _COVER_BUDGET:
            break
    if cover is None:
        return _assign(g, skills, holders, prefer_multi=True)
    return {s: min(u for u in cover if s in g.skills(u)) for s in skills}


def _min_ld_assignment(g: ExpertGraph, skills: list[str], dist: dict[str, float], holders: dict[str, list[int]]) -> dict[str, int]:
    groups: dict[float, list[str]] = {}
    for s in skills:
        groups.setdefault(dist[s], []).append(s)
    chosen = {}
    for group in groups.values():
        if len(group) == 1:
            chosen[group[0]] = min(holders[group[0]])
        else:
            chosen.update(_fewest_holders(g, group, holders))
    return {s: chosen[s] for s in skills}


def rarest_first(g: ExpertGraph, task: Task, cfg: AlgorithmConfig | None = None) -> Team:
    """RarestFirst with per-candidate single-source searches (no all-pairs table).

    Candidates are the holders of the rarest skill; a candidate's cost is the
    largest distance to the nearest holder of any other skill. The winner
    leads and takes the nearest holder of each skill.
    """
    skills = _supported(g, task)
    if not skills:
        return Team(None)
    rare = min(skills, key=lambda s: len(g.skill_support(s)))  # min() keeps task order on ties
    best, best_cost, best_holders = None, UNREACHABLE, None
    for a in sorted(g.skill_support(rare)):
        found = _nearest_holders(g, a, skills, best_cost if best is not None else UNREACHABLE)
        if found is None:
            continue
        dist, holders = found
        cost = max(dist.values())
        if best is None or cost < best_cost:
            best, best_cost, best_holders = a, cost, holders
    return Team(best, _assign(g, skills, best_holders, prefer_multi=False))


def min_ld(
    g: ExpertGraph,
    task: Task,
    leaders: str | Iterable[int] = "all",
    cfg: AlgorithmConfig = AlgorithmConfig(),
) -> Team:
    """Best leader distance over candidate leaders.

    Each candidate takes, per skill, a nearest holder; among equally near
    holders it picks the fewest distinct experts, which is what minimises
    the leader distance. ``leaders`` is
    ``"all"`` (every expert, ascending id), ``"hd"`` (the TFC leader
    candidates, as in MinLD*) or an explicit iterable of ids.
    """
    skills = _supported(g, task)
    if not skills:
        return Team(None)
    if leaders == "all":
        order = g.ids
    elif leaders == "hd":
        order = leader_candidates(g, task, cfg)
    else:
        order = list(leaders)
    best, best_ld = None, UNREACHABLE
    for v in order:
        found = _nearest_holders(g, v, skills, best_ld)
        if found is None:
            continue
        assignment = _min_ld_assignment(g, skills, *found)
        members = set(assignment.values()) - {v}
        ld = sum(found[0][s] for s in _first_skill_per_member(assignment, members))
        if best is None or ld < best_ld:
            best, best_ld = Team(v, assignment), ld
    return best if best is not None else Team(None)


def _first_skill_per_member(assignment: dict[str, int], members: set[int]) -> list[str]:
    seen, out = set(), []
    for s, u in assignment.items():
        if u in members and u not in seen:
            seen.add(u)
            out.append(s)
    return out


class _PairDistances:
    """Member-to-member distances within one algorithm call.

    Keeps one full single-source distance row per expert asked about, so
    each expert costs a single Dijkstra however many pairs it appears in.
    """

    def __init__(self, g: ExpertGraph):
        self.g = g
        self.rows: dict[int, dict[int, float]] = {}

    def __call__(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        row = self.rows.get(u) or self.rows.get(v)
        if row is None:
            row = self.rows[u] = single_source_distances(self.g, u)
        return row.get(v if row is self.rows.get(u) else u, UNREACHABLE)

    def skill_pair_sum(self, experts: Sequence[int], bound: float = UNREACHABLE) -> float:
        total = 0.0
        for i, u in enumerate(experts):
            for v in experts[i + 1:]:
                total += self(u, v)
            if total >= bound:
                return UNREACHABLE
        return total


def min_sd(g: ExpertGraph, task: Task, cfg: AlgorithmConfig | None = None) -> Team:
    """Best sum distance over seed experts.

    Every holder of a task skill seeds a team made of the nearest holder of
    each skill (same tie rule as :func:`min_ld`); the seed with the smallest
    sum distance wins and leads the team.
    """
    skills = _supported(g, task)
    if not skills:
        return Team(None)
    seeds = sorted(set().union(*(g.skill_support(s) for s in skills)))
    pd = _PairDistances(g)
    best, best_sd = None, UNREACHABLE
    for v in seeds:
        found = _nearest_holders(g, v, skills)
        assignment = _assign(g, skills, found[1], prefer_multi=True)
        sd = pd.skill_pair_sum([assignment[s] for s in skills], best_sd if best is not None else UNREACHABLE)
        if best is None or sd < best_sd:
            best, best_sd = Team(v, assignment), sd
    return best


ALGORITHMS: dict[str, Callable[[ExpertGraph, Task, AlgorithmConfig], Team]] = {
    "tfc-r": tfc_r,
    "tfc-n": tfc_n,
    "rf": rarest_first,
    "minld": lambda g, t, cfg=AlgorithmConfig(): min_ld(g, t, "all", cfg),
    "minld-star": lambda g, t, cfg=AlgorithmConfig(): min_ld(g, t, "hd", cfg),
    "minsd": min_sd,
}
