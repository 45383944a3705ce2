"""Plain-text graph and community files.

A graph stored under ``prefix`` is three UTF-8, LF-terminated files::

    prefix.nodes    id<TAB>name
    prefix.edges    id<TAB>id<TAB>weight
    prefix.skills   id<TAB>skill skill ...

Communities live in their own file, one per line:
``name<TAB>parent-or-"-"<TAB>comma-separated-ids``.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable

import numpy as np

from .graph import Community, Expert, ExpertGraph


class GraphFormatError(ValueError):
    pass


def format_weight(w: float) -> str:
    # at least 6 significant digits, never scientific notation
    return np.format_float_positional(float(w), unique=True, fractional=False, min_digits=6)


def _lines(path: Path):
    with open(path, encoding="utf-8", newline="\n") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if line:
                yield lineno, line


def _write(path: Path, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def graph_paths(prefix: str | os.PathLike) -> tuple[Path, Path, Path]:
    p = str(prefix)
    return Path(p + ".nodes"), Path(p + ".edges"), Path(p + ".skills")


def load_graph(prefix: str | os.PathLike) -> ExpertGraph:
    nodes_path, edges_path, skills_path = graph_paths(prefix)
    names: dict[int, str] = {}
    for lineno, line in _lines(nodes_path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise GraphFormatError(f"{nodes_path}:{lineno}: expected 'id<TAB>name'")
        names[int(parts[0])] = parts[1]

    skills: dict[int, list[str]] = {}
    if skills_path.exists():
        for lineno, line in _lines(skills_path):
            vid, _, rest = line.partition("\t")
            skills[int(vid)] = rest.split()

    edges = []
    for lineno, line in _lines(edges_path):
        parts = line.split("\t")
        if len(parts) != 3:
            raise GraphFormatError(f"{edges_path}:{lineno}: expected 'id<TAB>id<TAB>weight'")
        edges.append((int(parts[0]), int(parts[1]), float(parts[2])))

    unknown = set(skills) - set(names)
    if unknown:
        raise GraphFormatError(f"{skills_path}: skills for unknown ids {sorted(unknown)[:5]}")
    experts = [Expert(v, names[v], frozenset(skills.get(v, ()))) for v in sorted(names)]
    return ExpertGraph(experts, edges)


def save_graph(g: ExpertGraph, prefix: str | os.PathLike) -> None:
    nodes_path, edges_path, skills_path = graph_paths(prefix)
    nodes_path.parent.mkdir(parents=True, exist_ok=True)
    _write(nodes_path, (f"{e.id}\t{e.name}" for e in g.experts()))
    _write(edges_path, (f"{u}\t{v}\t{format_weight(w)}" for u, v, w in g.edges()))
    _write(skills_path, (f"{e.id}\t{' '.join(sorted(e.skills))}" for e in g.experts() if e.skills))


def load_communities(path: str | os.PathLike) -> list[Community]:
    out = []
    for lineno, line in _lines(Path(path)):
        parts = line.split("\t")
        if len(parts) != 3:
            raise GraphFormatError(f"{path}:{lineno}: expected 'name<TAB>parent<TAB>ids'")
        name, parent, ids = parts
        members = frozenset(int(x) for x in ids.split(",") if x)
        out.append(Community(name, members, None if parent == "-" else parent))
    validate_communities(out)
    return out


def save_communities(communities: Iterable[Community], path: str | os.PathLike) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    _write(
        Path(path),
        (
            f"{c.name}\t{c.parent or '-'}\t{','.join(str(v) for v in sorted(c.members))}"
            for c in communities
        ),
    )


def validate_communities(communities: Iterable[Community], g: ExpertGraph | None = None) -> None:
    """Check parent nesting (and membership in ``g`` when given)."""
    communities = list(communities)
    by_name = {c.name: c for c in communities}
    for c in communities:
        if g is not None:
            missing = [v for v in c.members if v not in g]
            if missing:
                raise GraphFormatError(f"community {c.name}: unknown ids {sorted(missing)[:5]}")
        if c.parent is not None:
            parent = by_name.get(c.parent)
            if parent is None:
                raise GraphFormatError(f"community {c.name}: unknown parent {c.parent}")
            if not c.members <= parent.members:
                raise GraphFormatError(f"community {c.name} is not contained in {c.parent}")
