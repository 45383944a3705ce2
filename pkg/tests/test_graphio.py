import shutil
from importlib import resources

import pytest

from teamform import Community, load_communities, load_graph, save_communities, save_graph
from teamform.graphio import GraphFormatError, format_weight, validate_communities

from conftest import TOY, random_graph


def test_round_trip(tmp_path, toy):
    save_graph(toy, tmp_path / "g")
    back = load_graph(tmp_path / "g")
    assert list(back.edges()) == list(toy.edges())
    assert [back.expert(v) for v in back.ids] == [toy.expert(v) for v in toy.ids]
    save_graph(back, tmp_path / "h")
    for ext in ("nodes", "edges", "skills"):
        assert (tmp_path / f"g.{ext}").read_bytes() == (tmp_path / f"h.{ext}").read_bytes()


def test_float_weights_round_trip(tmp_path):
    g = random_graph(3, integer_weights=False)
    save_graph(g, tmp_path / "f")
    assert list(load_graph(tmp_path / "f").edges()) == list(g.edges())


def test_format_weight():
    assert format_weight(2.0) == "2.00000"
    assert float(format_weight(1 - 3 / 7)) == 1 - 3 / 7


def test_bundled_copy_matches_fixture():
    bundled = resources.files("teamform.data")
    for ext in ("nodes", "edges", "skills", "communities"):
        assert bundled.joinpath(f"toy.{ext}").read_bytes() == TOY.with_suffix(f".{ext}").read_bytes()


def test_communities_round_trip(tmp_path, toy_communities):
    save_communities(toy_communities, tmp_path / "c")
    assert load_communities(tmp_path / "c") == toy_communities


def test_bad_lines(tmp_path):
    shutil.copy(f"{TOY}.nodes", tmp_path / "x.nodes")
    shutil.copy(f"{TOY}.skills", tmp_path / "x.skills")
    (tmp_path / "x.edges").write_text("0\t1\n")
    with pytest.raises(GraphFormatError):
        load_graph(tmp_path / "x")


def test_community_nesting_checked(toy):
    comms = [Community("big", frozenset({0, 1})), Community("small", frozenset({0, 2}), "big")]
    with pytest.raises(ValueError):
        validate_communities(comms, toy)
    with pytest.raises(ValueError):
        validate_communities([Community("x", frozenset({99}))], toy)
