import gzip
import io
from collections import Counter

import pytest

from teamform.graphio import load_graph, save_graph
from teamform.ingest import (
    AuthorStats,
    CorpusParseError,
    VenueConfig,
    build_graph,
    extract_skills,
    jaccard_distance,
    load_stopwords,
    parse_corpus,
    stem,
    title_skills,
    tokenize,
)

from conftest import DATA

XML = DATA / "mini_dblp.xml"


@pytest.fixture(scope="module")
def config():
    return VenueConfig.load()


@pytest.fixture(scope="module")
def records(config):
    return parse_corpus(XML, config)


@pytest.fixture(scope="module")
def built(records, config):
    return build_graph(records, config)


def test_tokenize():
    assert tokenize("Top-k Query Processing in 2010: a P2P view") == ["top", "query", "processing", "in", "p2p", "view"]


def test_stopwords_bundled():
    stop = load_stopwords()
    assert {"the", "and", "of", "at", "for"} <= stop
    assert "ranking" not in stop


def test_porter_stems():
    assert [stem(w) for w in ["ranking", "probabilistic", "databases", "query"]] == ["rank", "probabilist", "databas", "queri"]
    assert title_skills("A Unified Approach to Ranking in Probabilistic Databases") == [
        "unifi", "approach", "rank", "probabilist", "databas"]


def test_extract_skills_counts_twice():
    st = AuthorStats("x")
    for title in ["Ranking Probabilistic Databases", "Probabilistic Query Ranking"]:
        st.title_word_counts.update(tokenize(title))
    assert extract_skills(st) == {"rank", "probabilist"}
    assert extract_skills(st, min_count=1) == {"rank", "probabilist", "databas", "queri"}
    assert extract_skills(AuthorStats("empty")) == set()


def test_stems_are_pooled_before_counting():
    st = AuthorStats("x", title_word_counts=Counter({"rank": 1, "ranking": 1}))
    assert extract_skills(st) == {"rank"}


def test_parse_keeps_configured_venues(records):
    assert [r.key for r in records] == sorted(r.key for r in records)
    assert len(records) == 8  # the CHI paper and the www record are dropped
    by_key = {r.key: r for r in records}
    assert by_key["conf/vldb/AB2"].authors == ("Alice Ng", "Bob Li", "Carol Wu")
    assert by_key["conf/sigmod/A5"].venue == "sigmod"
    assert by_key["journals/vldb/B6"].authors[1] == "Jörg Schäfer"
    assert by_key["conf/icde/AB3"].title == "Top-k Query Processing."
    assert by_key["conf/vldb/AB1"].year == 2009


def test_parse_gzip_and_stream(records, config, tmp_path):
    gz = tmp_path / "c.xml.gz"
    gz.write_bytes(gzip.compress(XML.read_bytes()))
    assert parse_corpus(gz, config) == records
    assert parse_corpus(io.BytesIO(XML.read_bytes()), config, chunk_size=17) == records


def test_unknown_entity_reports_offset(config):
    doc = b'<dblp><inproceedings key="conf/vldb/x"><author>A &bogus; B</author></inproceedings></dblp>'
    with pytest.raises(CorpusParseError) as err:
        parse_corpus(io.BytesIO(doc), config)
    assert "bogus" in str(err.value)
    assert err.value.byte_offset == doc.index(b"&bogus;")


def test_malformed_xml(config):
    with pytest.raises(CorpusParseError) as err:
        parse_corpus(io.BytesIO(b"<dblp><article key='x'></dblp>"), config)
    assert err.value.byte_offset > 0


def test_threshold_rules(built):
    g, _ = built
    names = [g.name(v) for v in g.ids]
    assert names == ["Alice Ng", "Bob Li", "Carol Wu"]  # Dan Ode has 2 papers, Jorg 1
    alice, bob, carol = g.ids
    assert g.weight(alice, carol) is None  # exactly 2 joint papers
    assert g.weight(alice, bob) == pytest.approx(1 - 3 / 7)
    assert round(g.weight(alice, bob), 6) == 0.571429
    assert g.n_edges == 1


def test_skills_from_titles(built):
    g, _ = built
    assert g.skills(g.id_of("Alice Ng")) == {"rank", "probabilist", "queri", "graph"}
    assert g.skills(g.id_of("Bob Li")) == {"rank", "probabilist", "queri", "data"}
    assert g.skills(g.id_of("Carol Wu")) == {"stream"}  # "sketches" occurs once


def test_communities_nest(built):
    g, comms = built
    by_name = {c.name: c for c in comms}
    assert by_name["DB"].members == set(g.ids)
    assert by_name["ICDE"].members == {g.id_of("Alice Ng"), g.id_of("Bob Li")}
    assert by_name["KDD"].parent == "DM"
    for c in comms:
        if c.parent:
            assert c.members <= by_name[c.parent].members


def test_monotone_thresholds(records, config):
    g3, _ = build_graph(records, config)
    g2, _ = build_graph(records, config, min_pubs=2, min_joint=2)
    assert len(g2) >= len(g3) and g2.n_edges >= g3.n_edges
    g5, _ = build_graph(records, config, min_pubs=5)
    assert len(g5) == 2


def test_jaccard():
    assert jaccard_distance(set("abcde"), set("abcxy")) == pytest.approx(1 - 3 / 7)
    assert jaccard_distance({"p"}, {"p"}) == 0.0
    assert jaccard_distance(set(), set()) == 0.0


def test_deterministic_files(records, config, tmp_path):
    for run in ("a", "b"):
        g, _ = build_graph(list(reversed(records)) if run == "b" else records, config)
        save_graph(g, tmp_path / run)
    for ext in ("nodes", "edges", "skills"):
        assert (tmp_path / f"a.{ext}").read_bytes() == (tmp_path / f"b.{ext}").read_bytes()
    assert load_graph(tmp_path / "a").n_edges == 1


def test_custom_venues(tmp_path):
    p = tmp_path / "v.toml"
    p.write_text('[areas]\nHCI = ["CHI"]\n')
    cfg = VenueConfig.load(p)
    recs = parse_corpus(XML, cfg)
    assert [r.key for r in recs] == ["conf/chi/X9"]
    assert cfg.area_of("chi") == "HCI" and cfg.area_of("vldb") is None
