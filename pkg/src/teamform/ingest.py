"""Build an expert graph from a DBLP-style XML export.

Pipeline: keep publications from the configured venues, keep authors with
enough publications, connect pairs with enough joint publications (Jaccard
distance weights), and derive skills from recurring title words.
"""

from __future__ import annotations

import gzip
import html.entities
import logging
import os
import re
import xml.parsers.expat as expat
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import BinaryIO, Iterable

from nltk.stem import PorterStemmer

from .graph import Community, Expert, ExpertGraph

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger(__name__)

RECORD_TAGS = frozenset({"article", "inproceedings"})
_FIELDS = frozenset({"author", "title", "year", "booktitle", "journal"})
_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")
_stemmer = PorterStemmer()


class CorpusParseError(ValueError):
    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


@dataclass(frozen=True)
class PublicationRecord:
    key: str
    venue: str
    year: int
    title: str
    authors: tuple[str, ...]


@dataclass
class AuthorStats:
    """Per-author publication keys and lowercase title-word counts."""

    name: str
    publications: set[str] = field(default_factory=set)
    title_word_counts: Counter = field(default_factory=Counter)


@dataclass(frozen=True)
class VenueConfig:
    """Research area -> conference names (lowercase)."""

    areas: dict[str, tuple[str, ...]]

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> VenueConfig:
        """Read a TOML file with an ``[areas]`` table; the bundled one by default."""
        if path is None:
            text = resources.files("teamform.data").joinpath("venues.toml").read_text("utf-8")
        else:
            text = Path(path).read_text("utf-8")
        data = tomllib.loads(text)
        areas = data.get("areas", data)
        return cls({a: tuple(v.lower() for v in vs) for a, vs in areas.items()})

    def area_of(self, venue: str) -> str | None:
        for area, venues in self.areas.items():
            if venue in venues:
                return area
        return None

    @property
    def venues(self) -> frozenset[str]:
        return frozenset(v for vs in self.areas.values() for v in vs)


# -- text ---------------------------------------------------------------------


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop 1-char tokens and numbers."""
    return [t for t in _TOKEN_SPLIT.split(text.lower()) if len(t) >= 2 and not t.isdigit()]


def load_stopwords(path: str | os.PathLike | None = None) -> frozenset[str]:
    if path is None:
        text = resources.files("teamform.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        if not line.startswith("#"):
            words.update(tokenize(line))  # "don't" also contributes "don"
    return frozenset(words)


def stem(word: str) -> str:
    return _stemmer.stem(word)


def title_skills(title: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Stemmed, stop-word filtered tokens of a title, in order, deduplicated."""
    stopwords = load_stopwords() if stopwords is None else stopwords
    out = []
    for t in tokenize(title):
        if t not in stopwords:
            s = stem(t)
            if s not in out:
                out.append(s)
    return out


def extract_skills(stats: AuthorStats, stopwords: frozenset[str] | None = None, min_count: int = 2) -> set[str]:
    """Stems occurring at least ``min_count`` times over the author's titles."""
    stopwords = load_stopwords() if stopwords is None else stopwords
    counts: Counter = Counter()
    for word, n in stats.title_word_counts.items():
        if word not in stopwords:
            counts[stem(word)] += n
    return {s for s, n in counts.items() if n >= min_count and s}


# -- XML ----------------------------------------------------------------------


def _entity_dtd() -> bytes:
    decls = (f'<!ENTITY {name} "&#{cp};">' for name, cp in html.entities.name2codepoint.items())
    return "".join(decls).encode("ascii")


def _venue_of(key: str, booktitle: str, journal: str, config: VenueConfig) -> str | None:
    venues = config.venues
    parts = key.split("/")
    candidates = []
    if len(parts) >= 2:
        candidates.append(parts[1].lower())
    candidates += [booktitle.strip().lower(), journal.strip().lower()]
    for c in candidates:
        if c in venues:
            return c
    return None


def parse_corpus(source: str | os.PathLike | BinaryIO, config: VenueConfig, chunk_size: int = 1 << 20) -> list[PublicationRecord]:
    """Stream-parse DBLP XML, keeping records whose venue is configured.

    Named character entities resolve through the HTML entity table; an
    entity outside it is an error. Records come back sorted by key.
    """
    if isinstance(source, (str, os.PathLike)):
        opener = gzip.open if str(source).endswith(".gz") else open
        with opener(source, "rb") as fh:
            return parse_corpus(fh, config, chunk_size)

    parser = expat.ParserCreate()
    parser.SetParamEntityParsing(expat.XML_PARAM_ENTITY_PARSING_ALWAYS)
    parser.UseForeignDTD(True)
    parser.buffer_text = True
    dtd = _entity_dtd()

    def external_entity(context, base, system_id, public_id):
        sub = parser.ExternalEntityParserCreate(context)
        sub.Parse(dtd, True)
        return 1

    def skipped_entity(name, is_parameter):
        raise CorpusParseError(f"unknown entity &{name};", parser.CurrentByteIndex)

    records: dict[str, PublicationRecord] = {}
    current: dict | None = None
    field_name: str | None = None
    text: list[str] = []
    depth = 0  # nesting inside a field element (e.g. <i> in titles)

    def start(tag, attrs):
        nonlocal current, field_name, depth
        if current is None:
            if tag in RECORD_TAGS:
                current = {"key": attrs.get("key", ""), "author": [], "title": "", "year": "",
                           "booktitle": "", "journal": ""}
            return
        if field_name is not None:
            depth += 1
        elif tag in _FIELDS:
            field_name, depth = tag, 0
            text.clear()

    def end(tag):
        nonlocal current, field_name, depth
        if current is None:
            return
        if field_name is not None:
            if depth:
                depth -= 1
                return
            value = " ".join("".join(text).split())
            if field_name == "author":
                current["author"].append(value)
            else:
                current[field_name] = value
            field_name = None
            return
        if tag in RECORD_TAGS:
            rec = current
            current = None
            venue = _venue_of(rec["key"], rec["booktitle"], rec["journal"], config)
            if venue is None or not rec["author"] or not rec["key"]:
                return
            year = int(rec["year"]) if rec["year"].isdigit() else 0
            authors = tuple(dict.fromkeys(rec["author"]))
            records[rec["key"]] = PublicationRecord(rec["key"], venue, year, rec["title"], authors)

    def chars(data):
        if field_name is not None:
            text.append(data)

    parser.ExternalEntityRefHandler = external_entity
    parser.SkippedEntityHandler = skipped_entity
    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    try:
        while True:
            chunk = source.read(chunk_size)
            if not chunk:
                break
            parser.Parse(chunk, False)
        parser.Parse(b"", True)
    except expat.ExpatError as exc:
        raise CorpusParseError(expat.ErrorString(exc.code), parser.ErrorByteIndex) from None
    log.info("parsed %d records from configured venues", len(records))
    return [records[k] for k in sorted(records)]


# -- graph construction ---------------------------------------------------


def author_stats(records: Iterable[PublicationRecord]) -> dict[str, AuthorStats]:
    stats: dict[str, AuthorStats] = {}
    for rec in records:
        words = tokenize(rec.title)
        for name in rec.authors:
            st = stats.setdefault(name, AuthorStats(name))
            st.publications.add(rec.key)
            st.title_word_counts.update(words)
    return stats


def jaccard_distance(pubs_u: set[str], pubs_v: set[str]) -> float:
    union = len(pubs_u | pubs_v)
    return 1.0 - len(pubs_u & pubs_v) / union if union else 0.0


def build_graph(
    records: Iterable[PublicationRecord],
    config: VenueConfig | None = None,
    min_pubs: int = 3,
    min_joint: int = 3,
    min_skill_count: int = 2,
    stopwords: frozenset[str] | None = None,
) -> tuple[ExpertGraph, list[Community]]:
    """Expert graph plus area and conference communities.

    Ids are assigned in author-name order so identical input yields
    identical files.
    """
    records = list(records)
    config = VenueConfig.load() if config is None else config
    stopwords = load_stopwords() if stopwords is None else stopwords
    stats = author_stats(records)
    names = sorted(n for n, st in stats.items() if len(st.publications) >= min_pubs)
    ids = {n: i for i, n in enumerate(names)}

    joint: Counter = Counter()
    for rec in records:
        present = sorted(ids[a] for a in rec.authors if a in ids)
        joint.update(combinations(present, 2))

    edges = []
    for (u, v), n in sorted(joint.items()):
        if n >= min_joint:
            w = jaccard_distance(stats[names[u]].publications, stats[names[v]].publications)
            edges.append((u, v, w))

    experts = [
        Expert(ids[n], n, frozenset(extract_skills(stats[n], stopwords, min_skill_count)))
        for n in names
    ]
    g = ExpertGraph(experts, edges)

    by_venue: dict[str, set[int]] = {}
    for rec in records:
        for a in rec.authors:
            if a in ids:
                by_venue.setdefault(rec.venue, set()).add(ids[a])
    communities = []
    for area, venues in config.areas.items():
        area_members = set().union(*(by_venue.get(v, set()) for v in venues))
        communities.append(Community(area, frozenset(area_members)))
        for v in venues:
            communities.append(Community(v.upper(), frozenset(by_venue.get(v, ())), parent=area))
    return g, communities
