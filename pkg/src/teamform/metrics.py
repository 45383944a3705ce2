"""Communication-cost measures for a team: diameter, sum distance, leader distance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .graph import UNREACHABLE, ExpertGraph, single_source_distances


class ContractError(ValueError):
    """A metric was asked for a value its preconditions do not define."""


@dataclass(frozen=True)
class Task:
    """Ordered list of distinct required skills."""

    skills: tuple[str, ...]

    def __post_init__(self):
        skills = tuple(self.skills)
        if not skills:
            raise ValueError("a task needs at least one skill")
        if len(set(skills)) != len(skills):
            raise ValueError(f"duplicate skills in task {skills}")
        object.__setattr__(self, "skills", skills)

    @classmethod
    def parse(cls, text: str) -> Task:
        """Build a task from a comma separated string such as ``"a,b,c"``."""
        return cls(tuple(s.strip() for s in text.split(",") if s.strip()))

    def __len__(self) -> int:
        return len(self.skills)

    def __iter__(self):
        return iter(self.skills)


@dataclass(frozen=True)
class Team:
    """A leader plus a skill -> expert assignment.

    ``fallback`` lists the skills that were filled outside the leader's hop
    neighbourhood (the random / nearest step of TFC).
    """

    leader: int | None
    assignment: Mapping[str, int] = field(default_factory=dict)
    fallback: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))
        object.__setattr__(self, "fallback", frozenset(self.fallback))

    @property
    def members(self) -> frozenset[int]:
        out = set(self.assignment.values())
        if self.leader is not None:
            out.add(self.leader)
        return frozenset(out)

    @property
    def fallback_experts(self) -> frozenset[int]:
        return frozenset(self.assignment[s] for s in self.fallback)

    def coverage(self, task: Task) -> float:
        return sum(s in self.assignment for s in task.skills) / len(task)

    def __eq__(self, other):
        if not isinstance(other, Team):
            return NotImplemented
        return (
            self.leader == other.leader
            and dict(self.assignment) == dict(other.assignment)
            and self.fallback == other.fallback
        )

    def __hash__(self):
        return hash((self.leader, frozenset(self.assignment.items()), self.fallback))


@dataclass(frozen=True)
class CostReport:
    cardinality: int
    diameter: float
    sum_distance: float
    leader_distance: float
    covered: float

    CSV_HEADER = "algorithm,k,cardinality,diameter,sum_distance,leader_distance,covered,wall_ms,random_experts"

    def csv_row(self, algorithm: str, k: int, wall_ms: float, random_experts: int) -> str:
        vals = [
            algorithm,
            str(k),
            str(self.cardinality),
            _fmt(self.diameter),
            _fmt(self.sum_distance),
            _fmt(self.leader_distance),
            _fmt(self.covered),
            f"{wall_ms:.3f}",
            str(random_experts),
        ]
        return ",".join(vals)


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf"
    return f"{x:.6g}"


def validate_team(g: ExpertGraph, team: Team) -> None:
    """Raise ContractError unless every assigned expert holds its skill."""
    for s, v in team.assignment.items():
        if v not in g:
            raise ContractError(f"expert {v} assigned to {s!r} is not in the graph")
        if s not in g.skills(v):
            raise ContractError(f"expert {v} does not possess assigned skill {s!r}")
    if team.leader is not None and team.leader not in g:
        raise ContractError(f"leader {team.leader} is not in the graph")


def _pair_distances(g: ExpertGraph, nodes: Iterable[int]) -> dict[tuple[int, int], float]:
    nodes = sorted(set(nodes))
    out = {}
    for i, u in enumerate(nodes):
        rest = nodes[i + 1:]
        if not rest:
            break
        dist = single_source_distances(g, u, targets=rest)
        for v in rest:
            d = dist.get(v, UNREACHABLE)
            out[u, v] = out[v, u] = d
    return out


def diameter(g: ExpertGraph, team: Team) -> float:
    """Largest shortest-path distance between two members; 0 for one member."""
    members = team.members
    if not members:
        raise ContractError("diameter of an empty team")
    pd = _pair_distances(g, members)
    return max(pd.values(), default=0.0)


def sum_distance(g: ExpertGraph, team: Team, task: Task) -> float:
    """Sum over unordered task-skill pairs of the distance between their experts.

    Two skills held by the same expert contribute 0.
    """
    missing = [s for s in task.skills if s not in team.assignment]
    if missing:
        raise ContractError(f"skills {missing} are not assigned")
    return _skill_pair_sum(g, [team.assignment[s] for s in task.skills])


def _skill_pair_sum(g: ExpertGraph, experts: list[int]) -> float:
    pd = _pair_distances(g, experts)
    total = 0.0
    for u, v in combinations(experts, 2):
        if u != v:
            total += pd[u, v]
    return total


def leader_distance(g: ExpertGraph, team: Team) -> float:
    """Sum of distances from the leader to every other member."""
    if team.leader is None:
        raise ContractError("leader distance needs a leader")
    others = team.members - {team.leader}
    if not others:
        return 0.0
    dist = single_source_distances(g, team.leader, targets=others)
    return sum(dist.get(v, UNREACHABLE) for v in others)


def evaluate(g: ExpertGraph, team: Team, task: Task) -> CostReport:
    """Bundle all measures for ``team`` on ``task``.

    Partially covered tasks do not raise: sum distance runs over the
    assigned skills only and ``covered`` reports the fraction. A team
    without a leader gets ``nan`` leader distance.
    """
    members = team.members
    covered = team.coverage(task)
    if not members:
        return CostReport(0, 0.0, 0.0, 0.0, covered)
    assigned = [team.assignment[s] for s in task.skills if s in team.assignment]
    ld = math.nan if team.leader is None else leader_distance(g, team)
    return CostReport(
        cardinality=len(members),
        diameter=diameter(g, team),
        sum_distance=_skill_pair_sum(g, assigned),
        leader_distance=ld,
        covered=covered,
    )
