import math

import networkx as nx
import pytest

from teamform import (
    UNREACHABLE,
    Community,
    Expert,
    ExpertGraph,
    GraphValidationError,
    UnknownExpertError,
    connected_components,
    degree_stats,
    hd_set,
    k_hop_neighborhood,
    largest_connected_component,
    shortest_path_distance,
    single_source_distances,
)
from teamform.graph import hop_distances, iter_dijkstra

from conftest import FULL_TASK, all_pairs, random_graph, to_nx


def test_toy_shape(toy):
    assert len(toy) == 20
    assert toy.n_edges == 23
    assert toy.skill_universe == {"a", "b", "c", "d", "e"}
    assert toy.skills(toy.id_of("E")) == {"b", "c", "d"}
    assert toy.weight(toy.id_of("J"), toy.id_of("K")) == 1.0
    assert toy.weight(toy.id_of("A"), toy.id_of("E")) is None


def test_toy_skill_support(toy):
    names = lambda s: sorted(toy.name(v) for v in toy.skill_support(s))
    assert names("a") == ["A", "J", "K", "R"]
    assert names("e") == ["B", "D", "H", "I", "Q", "S"]
    assert toy.skill_support("zz") == frozenset()


def test_distances_match_networkx(toy):
    oracle = all_pairs(toy)
    for u in toy.ids:
        assert single_source_distances(toy, u) == pytest.approx(oracle[u])


def test_named_distances(toy):
    d = lambda a, b: shortest_path_distance(toy, toy.id_of(a), toy.id_of(b))
    assert d("C", "S") == 3
    assert d("A", "S") == 5
    assert d("A", "T") == 4
    assert d("J", "J") == 0


def test_dijkstra_settles_in_order(toy):
    seq = list(iter_dijkstra(toy, toy.id_of("G")))
    dists = [d for _, d in seq]
    assert dists == sorted(dists)
    assert len(seq) == 20
    for (u, du), (v, dv) in zip(seq, seq[1:]):
        assert du < dv or u < v  # equal distances settle by id


def test_targets_and_cutoff(toy):
    a = toy.id_of("A")
    got = single_source_distances(toy, a, targets=[toy.id_of("S")])
    assert got[toy.id_of("S")] == 5
    near = single_source_distances(toy, a, cutoff=2)
    assert set(near) == {toy.id_of(n) for n in "ACQR"}


def test_unreachable():
    g = ExpertGraph([Expert(0, "x"), Expert(1, "y")])
    assert shortest_path_distance(g, 0, 1) == UNREACHABLE == math.inf
    assert single_source_distances(g, 0) == {0: 0.0}


def test_hop_neighbourhoods(toy):
    c = toy.id_of("C")
    one = {toy.name(v) for v in k_hop_neighborhood(toy, c, 1)}
    assert one == {"A", "D", "F", "S", "T"}
    two = {toy.name(v) for v in k_hop_neighborhood(toy, c, 2)}
    assert two == one | {"B", "E", "G", "J", "P", "Q", "R"}
    assert c not in k_hop_neighborhood(toy, c, 3)
    hops = hop_distances(toy, c, 2)
    assert hops[toy.id_of("A")] == 1 and hops[toy.id_of("Q")] == 2
    with pytest.raises(ValueError):
        k_hop_neighborhood(toy, c, 0)


def test_hop_neighbourhood_matches_networkx():
    for seed in range(30):
        g = random_graph(seed)
        h = to_nx(g)
        for v in g.ids:
            for k in (1, 2, 3):
                expect = set(nx.single_source_shortest_path_length(h, v, cutoff=k)) - {v}
                assert k_hop_neighborhood(g, v, k) == expect


def test_degree_and_hd(toy):
    degrees, d_avg = degree_stats(toy)
    assert d_avg == pytest.approx(2.3)
    assert sum(degrees.values()) == 46
    assert [toy.name(v) for v in hd_set(toy, FULL_TASK)] == ["C", "E", "G"]
    assert hd_set(toy, ["a"]) == []
    assert [toy.name(v) for v in hd_set(toy, ["d"])] == ["E", "G"]


def test_components():
    g = ExpertGraph([Expert(i, str(i)) for i in range(6)], [(0, 1, 1.0), (1, 2, 1.0), (4, 5, 2.0)])
    comps = connected_components(g)
    assert comps == [frozenset({0, 1, 2}), frozenset({4, 5}), frozenset({3})]
    lcc = largest_connected_component(g)
    assert isinstance(lcc, Community) and lcc.members == {0, 1, 2}


def test_subgraph_keeps_ids(toy, toy_communities):
    c1 = toy_communities[0]
    sub = toy.subgraph(c1.members)
    assert set(sub.ids) == set(c1.members)
    assert sub.name(2) == "C"
    assert sub.weight(2, 18) == 3.0
    assert sub.n_edges == 9  # A-B B-T C-T C-S A-C C-D A-R A-Q P-D
    assert all(u in c1.members and v in c1.members for u, v, _ in sub.edges())


@pytest.mark.parametrize("edges, msg", [
    ([(0, 0, 1.0)], "self-loop"),
    ([(0, 1, 1.0), (1, 0, 2.0)], "parallel"),
    ([(0, 1, -1.0)], "weight"),
    ([(0, 1, math.inf)], "weight"),
    ([(0, 7, 1.0)], "unknown"),
])
def test_rejects_bad_edges(edges, msg):
    with pytest.raises((GraphValidationError, UnknownExpertError)):
        ExpertGraph([Expert(0, "a"), Expert(1, "b")], edges)


def test_rejects_bad_skill_tokens():
    with pytest.raises(ValueError):
        Expert(0, "x", frozenset({"Has Space"}))


def test_unknown_expert(toy):
    with pytest.raises(UnknownExpertError):
        toy.neighbors(99)
    with pytest.raises(UnknownExpertError):
        toy.id_of("nobody")
