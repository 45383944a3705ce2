"""Shared fixtures: the bundled toy graph and independent networkx oracles."""

from __future__ import annotations

from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from teamform import Expert, ExpertGraph, Task, load_communities, load_graph

ROOT = Path(__file__).resolve().parents[1]
TOY = ROOT / "fixtures" / "toy"
DATA = Path(__file__).resolve().parent / "data"
FULL_TASK = Task(("a", "b", "c", "d", "e"))


@pytest.fixture(scope="session")
def toy() -> ExpertGraph:
    return load_graph(TOY)


@pytest.fixture(scope="session")
def toy_communities():
    return load_communities(f"{TOY}.communities")


@pytest.fixture
def ids(toy):
    """Name -> id lookup: ``ids("A", "C")`` returns ``{0, 2}``."""
    def lookup(*names):
        return {toy.id_of(n) for n in names}
    return lookup


def to_nx(g: ExpertGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.ids)
    h.add_weighted_edges_from(g.edges())
    return h


def all_pairs(g: ExpertGraph) -> dict[int, dict[int, float]]:
    return {u: dict(row) for u, row in nx.all_pairs_dijkstra_path_length(to_nx(g))}


def random_graph(seed: int, n_max: int = 25, n_skills: int = 6, integer_weights: bool = True) -> ExpertGraph:
    """Connected-ish random graph with small integer or float weights."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, n_max + 1))
    vocab = [chr(ord("a") + i) for i in range(n_skills)]
    experts = []
    for v in range(n):
        k = int(rng.integers(0, 4))
        experts.append(Expert(v, f"e{v}", frozenset(rng.choice(vocab, size=k, replace=False).tolist())))
    edges = set()
    for v in range(1, n):  # spanning tree keeps most instances connected
        edges.add((int(rng.integers(0, v)), v))
    for _ in range(int(rng.integers(0, 2 * n))):
        u, v = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        edges.add((u, v))
    if rng.random() < 0.2 and n > 5:  # occasionally cut the graph in two
        cut = int(rng.integers(2, n - 2))
        edges = {(u, v) for u, v in edges if (u < cut) == (v < cut)}
    w = (lambda: float(rng.integers(1, 6))) if integer_weights else (lambda: float(rng.random()))
    return ExpertGraph(experts, [(u, v, w()) for u, v in sorted(edges)])


def random_task(g: ExpertGraph, seed: int, k_max: int = 6) -> Task | None:
    universe = sorted(g.skill_universe)
    if not universe:
        return None
    rng = np.random.default_rng(seed + 10_000)
    k = int(rng.integers(1, min(k_max, len(universe)) + 1))
    return Task(tuple(rng.choice(universe, size=k, replace=False).tolist()))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    outcomes = {}
    for key in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(key, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid and rep.when in ("call", "setup"):
                n = int(nodeid.split("test_criterion_")[1].split("_")[0])
                if key != "passed" or n not in outcomes:
                    outcomes[n] = "PASS" if key == "passed" else "FAIL"
    if not outcomes:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n in sorted(outcomes):
        terminalreporter.write_line(f"criterion {n}: {outcomes[n]}  {CRITERIA[n]}")
