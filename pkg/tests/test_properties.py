"""Randomised properties over small generated graphs."""

from hypothesis import given, settings
from hypothesis import strategies as st

from teamform import (
    ALGORITHMS,
    AlgorithmConfig,
    Task,
    Team,
    evaluate,
    k_hop_neighborhood,
    min_ld,
    sum_distance,
)
from teamform.metrics import validate_team

from conftest import random_graph, random_task

seeds = st.integers(min_value=0, max_value=10**6)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(sorted(ALGORITHMS)))
def test_full_coverage_and_valid_assignment(seed, algo):
    g = random_graph(seed)
    task = random_task(g, seed)
    if task is None:
        return
    team = ALGORITHMS[algo](g, task, AlgorithmConfig(rng_seed=seed))
    assert evaluate(g, team, task).covered == 1.0
    validate_team(g, team)
    assert set(team.assignment) == set(task.skills)
    assert team.leader in team.members


@settings(max_examples=40, deadline=None)
@given(seeds, seeds)
def test_seed_determinism(graph_seed, rng_seed):
    g = random_graph(graph_seed)
    task = random_task(g, graph_seed)
    if task is None:
        return
    cfg = AlgorithmConfig(rng_seed=rng_seed)
    for algo in ALGORITHMS.values():
        assert algo(g, task, cfg) == algo(g, task, cfg)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_hd_restriction_never_helps(seed):
    g = random_graph(seed)
    task = random_task(g, seed)
    if task is None:
        return
    full = evaluate(g, min_ld(g, task, "all"), task).leader_distance
    star = evaluate(g, min_ld(g, task, "hd"), task).leader_distance
    assert star >= full


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_hop_neighbourhoods_nest(seed):
    g = random_graph(seed)
    for v in g.ids:
        rings = [k_hop_neighborhood(g, v, k) for k in (1, 2, 3, 4)]
        assert all(a <= b for a, b in zip(rings, rings[1:]))


@settings(max_examples=60, deadline=None)
@given(seeds, st.randoms(use_true_random=False))
def test_sum_distance_ignores_skill_order(seed, rnd):
    g = random_graph(seed)
    task = random_task(g, seed)
    if task is None:
        return
    team = ALGORITHMS["minsd"](g, task, AlgorithmConfig())
    shuffled = list(task.skills)
    rnd.shuffle(shuffled)
    assert sum_distance(g, team, Task(tuple(shuffled))) == sum_distance(g, team, task)
    relabelled = Team(team.leader, dict(reversed(list(team.assignment.items()))))
    assert sum_distance(g, relabelled, task) == sum_distance(g, team, task)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_team_size_and_leader_distance_bounds(seed):
    g = random_graph(seed)
    task = random_task(g, seed)
    if task is None:
        return
    for name in ("tfc-r", "tfc-n", "minld"):
        rep = evaluate(g, ALGORITHMS[name](g, task, AlgorithmConfig()), task)
        assert rep.leader_distance >= 0
        assert rep.cardinality <= len(task) + 1
