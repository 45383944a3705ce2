"""Experiment harness: random tasks, multi-algorithm runs, averaged reports,
and the multi-team case study driven by DC."""

from __future__ import annotations

import csv
import dataclasses
import io
import logging
import math
import os
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .algorithms import ALGORITHMS, AlgorithmConfig, dc
from .graph import Community, ExpertGraph
from .ingest import load_stopwords, stem, title_skills
from .metrics import CostReport, Task, Team, evaluate

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger(__name__)

METRICS = ("cardinality", "diameter", "sum_distance", "leader_distance")
TFC_VARIANTS = ("tfc-r", "tfc-n")


@dataclass(frozen=True)
class ExperimentPlan:
    """What to run.

    ``task_source`` names the graph whose skill universe tasks are drawn
    from; by default the smallest graph, so every task is coverable in the
    graphs that contain it. ``k_caps`` limits the task size per graph.
    """

    k_range: tuple[int, int] = (4, 20)
    trials: int = 100
    algorithms: tuple[str, ...] = ("rf", "minld-star", "minsd", "tfc-r", "tfc-n")
    task_source: str | None = None
    seed: int = 0
    k_caps: Mapping[str, int] = field(default_factory=dict)
    config: AlgorithmConfig = AlgorithmConfig()

    def __post_init__(self):
        lo, hi = self.k_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad k_range {self.k_range}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithms {unknown}; choose from {sorted(ALGORITHMS)}")
        object.__setattr__(self, "k_range", (int(lo), int(hi)))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "k_caps", dict(self.k_caps))

    @property
    def ks(self) -> range:
        return range(self.k_range[0], self.k_range[1] + 1)

    @classmethod
    def from_dict(cls, data: Mapping) -> ExperimentPlan:
        data = dict(data)
        cfg_fields = {f.name for f in dataclasses.fields(AlgorithmConfig)}
        cfg = AlgorithmConfig(**{k: data.pop(k) for k in list(data) if k in cfg_fields})
        if "k_range" in data:
            data["k_range"] = tuple(data["k_range"])
        if "algorithms" in data:
            data["algorithms"] = tuple(data["algorithms"])
        return cls(config=cfg, **data)

    @classmethod
    def load(cls, path: str | os.PathLike) -> ExperimentPlan:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        return cls.from_dict(data.get("plan", data))


def trial_seed(seed: int, k: int, trial: int) -> int:
    """Seed for one (k, trial) cell, independent of execution order."""
    return int(np.random.SeedSequence([seed, k, trial]).generate_state(1)[0])


def generate_tasks(universe: Iterable[str], k: int, trials: int, seed: int) -> list[Task]:
    """``trials`` uniform k-subsets of ``universe`` (sampled order kept)."""
    pool = sorted(universe)
    if k > len(pool):
        raise ValueError(f"k={k} exceeds the {len(pool)} available skills")
    if k < 1:
        raise ValueError("k must be >= 1")
    tasks = []
    for i in range(trials):
        rng = np.random.default_rng([seed, k, i])
        idx = rng.choice(len(pool), size=k, replace=False)
        tasks.append(Task(tuple(pool[j] for j in idx)))
    return tasks


@dataclass(frozen=True)
class RunRecord:
    graph: str
    algorithm: str
    k: int
    trial: int
    team: Team
    report: CostReport
    wall_ms: float

    @property
    def random_experts(self) -> int:
        return len(self.team.fallback_experts)

    @property
    def full(self) -> bool:
        return self.report.covered == 1.0


@dataclass(frozen=True)
class BenchRow:
    graph: str
    algorithm: str
    k: int
    n_full: int
    n_partial: int
    cardinality: float
    diameter: float
    sum_distance: float
    leader_distance: float
    wall_ms: float
    median_wall_ms: float
    random_fraction: float  # nan for algorithms without a fallback step
    partial_coverage: float  # mean coverage of the partial runs, nan if none


@dataclass
class BenchmarkReport:
    plan: ExperimentPlan
    graphs: tuple[str, ...]
    runs: list[RunRecord]
    rows: list[BenchRow]

    def row(self, graph: str, algorithm: str, k: int) -> BenchRow:
        for r in self.rows:
            if (r.graph, r.algorithm, r.k) == (graph, algorithm, k):
                return r
        raise KeyError((graph, algorithm, k))

    def runs_for(self, graph: str, algorithm: str, k: int | None = None) -> list[RunRecord]:
        return [r for r in self.runs if r.graph == graph and r.algorithm == algorithm and (k is None or r.k == k)]


def _mean(xs: Sequence[float]) -> float:
    return float(np.mean(xs)) if len(xs) else math.nan


def aggregate(runs: Sequence[RunRecord]) -> list[BenchRow]:
    """One row per (graph, algorithm, k); means over full-coverage runs only."""
    cells: dict[tuple[str, str, int], list[RunRecord]] = {}
    for r in runs:
        cells.setdefault((r.graph, r.algorithm, r.k), []).append(r)
    rows = []
    for (gname, algo, k), rs in cells.items():
        full = [r for r in rs if r.full]
        part = [r for r in rs if not r.full]
        times = [r.wall_ms for r in full]
        rows.append(BenchRow(
            graph=gname,
            algorithm=algo,
            k=k,
            n_full=len(full),
            n_partial=len(part),
            cardinality=_mean([r.report.cardinality for r in full]),
            diameter=_mean([r.report.diameter for r in full]),
            sum_distance=_mean([r.report.sum_distance for r in full]),
            leader_distance=_mean([r.report.leader_distance for r in full]),
            wall_ms=_mean(times),
            median_wall_ms=float(statistics.median(times)) if times else math.nan,
            random_fraction=(
                _mean([bool(r.team.fallback) for r in full]) if algo in TFC_VARIANTS else math.nan
            ),
            partial_coverage=_mean([r.report.covered for r in part]),
        ))
    return rows


def run_benchmark(
    plan: ExperimentPlan,
    graphs: Mapping[str, ExpertGraph],
    progress: Callable[[str], None] | None = None,
) -> BenchmarkReport:
    """Run every algorithm on every graph for every k and trial.

    Tasks are identical across graphs and algorithms for a given (k,
    trial). Wall time covers the algorithm call only.
    """
    if not graphs:
        raise ValueError("no graphs given")
    names = list(graphs)
    source = plan.task_source or min(names, key=lambda n: len(graphs[n]))
    if source not in graphs:
        raise ValueError(f"task source {source!r} is not among the graphs {names}")
    universe = graphs[source].skill_universe
    for n in names:
        missing = universe - graphs[n].skill_universe
        if missing:
            log.warning("graph %s lacks %d task-source skills; affected runs are partial", n, len(missing))

    runs = []
    for k in plan.ks:
        tasks = generate_tasks(universe, k, plan.trials, plan.seed)
        for gname in names:
            if k > plan.k_caps.get(gname, k):
                continue
            g = graphs[gname]
            # task-major order: every algorithm sees the same machine load for a task
            for i, task in enumerate(tasks):
                cfg = dataclasses.replace(plan.config, rng_seed=trial_seed(plan.seed, k, i))
                for algo in plan.algorithms:
                    t0 = time.perf_counter()
                    team = ALGORITHMS[algo](g, task, cfg)
                    wall = (time.perf_counter() - t0) * 1000.0
                    runs.append(RunRecord(gname, algo, k, i, team, evaluate(g, team, task), wall))
            if progress:
                progress(f"k={k} graph={gname} done")
    return BenchmarkReport(plan, tuple(names), runs, aggregate(runs))


# -- report emission --------------------------------------------------------


def _cell(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return f"{x:.4f}" if isinstance(x, float) else str(x)


def _grid(report: BenchmarkReport, graph: str, attr: str, algorithms: Sequence[str]) -> list[list[str]]:
    out = [["|T|", *algorithms]]
    for k in report.plan.ks:
        line = [str(k)]
        for a in algorithms:
            try:
                line.append(_cell(getattr(report.row(graph, a, k), attr)))
            except KeyError:
                line.append("")
        out.append(line)
    return out


def _write_csv(path: Path, rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def write_report(report: BenchmarkReport, outdir: str | os.PathLike) -> list[Path]:
    """Emit CSVs (one per metric and graph; rows |T|, columns algorithms),
    timing and fallback-fraction CSVs, raw per-run CSVs and a markdown summary."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    algos = list(report.plan.algorithms)
    written = []
    for gname in report.graphs:
        for metric in METRICS:
            p = out / f"{metric}_{gname}.csv"
            _write_csv(p, _grid(report, gname, metric, algos))
            written.append(p)
        p = out / f"runs_{gname}.csv"
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CostReport.CSV_HEADER + "\n")
            for r in report.runs:
                if r.graph == gname:
                    fh.write(r.report.csv_row(r.algorithm, r.k, r.wall_ms, r.random_experts) + "\n")
        written.append(p)

    cols = [(g, a) for g in report.graphs for a in algos]
    for name, attr, keep in (
        ("timing.csv", "wall_ms", cols),
        ("timing_median.csv", "median_wall_ms", cols),
        ("random_experts.csv", "random_fraction", [(g, a) for g, a in cols if a in TFC_VARIANTS]),
        ("partial_runs.csv", "n_partial", cols),
    ):
        rows = [["|T|", *[f"{g}/{a}" for g, a in keep]]]
        for k in report.plan.ks:
            line = [str(k)]
            for g, a in keep:
                try:
                    line.append(_cell(getattr(report.row(g, a, k), attr)))
                except KeyError:
                    line.append("")
            rows.append(line)
        p = out / name
        _write_csv(p, rows)
        written.append(p)

    p = out / "summary.md"
    p.write_text(summary_markdown(report), encoding="utf-8")
    written.append(p)
    return written


def summary_markdown(report: BenchmarkReport) -> str:
    plan = report.plan
    buf = io.StringIO()
    buf.write("# Benchmark summary\n\n")
    buf.write(f"- k range: {plan.k_range[0]}..{plan.k_range[1]}, trials per k: {plan.trials}, seed: {plan.seed}\n")
    buf.write(f"- algorithms: {', '.join(plan.algorithms)}\n")
    buf.write(f"- graphs: {', '.join(report.graphs)}\n")
    buf.write("- means are over full-coverage runs; partial runs are counted in partial_runs.csv\n\n")
    titles = {
        "cardinality": "Average cardinality of teams",
        "diameter": "Average diameter of teams",
        "sum_distance": "Average sum distance of teams",
        "leader_distance": "Average leader distance of teams",
        "wall_ms": "Average wall time per team (ms)",
    }
    for gname in report.graphs:
        for attr, title in titles.items():
            grid = _grid(report, gname, attr, plan.algorithms)
            buf.write(f"## {title} ({gname})\n\n")
            buf.write("| " + " | ".join(grid[0]) + " |\n")
            buf.write("|" + "---|" * len(grid[0]) + "\n")
            for line in grid[1:]:
                buf.write("| " + " | ".join(line) + " |\n")
            buf.write("\n")
    return buf.getvalue()


# -- case study ----------------------------------------------------------------


def load_tasks(path: str | os.PathLike) -> dict[str, Task]:
    """Read ``[tasks.NAME]`` tables with either ``title`` or ``skills``.

    Titles go through the same tokenise / stop-word / stem pipeline as
    expert skills; explicit skill lists are lowercased and stemmed unless
    the table sets ``stem = false``.
    """
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    stop = load_stopwords()
    out = {}
    for name, spec in data.get("tasks", {}).items():
        if "title" in spec:
            skills = title_skills(spec["title"], stop)
        else:
            skills = []
            for word in spec["skills"]:
                t = word.strip().lower()
                s = stem(t) if spec.get("stem", True) else t
                if s and s not in skills:
                    skills.append(s)
        out[name] = Task(tuple(skills))
    return out


@dataclass
class CaseStudy:
    """Per task, the team found in each community (None = blank cell)."""

    tasks: dict[str, Task]
    communities: list[str]
    cells: dict[str, dict[str, Team | None]]


def run_case_study(
    g: ExpertGraph,
    communities: Sequence[Community],
    tasks: Mapping[str, Task],
    threshold: float = 0.9,
    cfg: AlgorithmConfig = AlgorithmConfig(),
    network_name: str | None = None,
) -> CaseStudy:
    """Run DC for each task over all communities.

    With ``network_name`` the whole graph is added as an extra first
    community under that name.
    """
    comms = list(communities)
    if network_name is not None:
        comms.insert(0, Community(network_name, frozenset(g.ids)))
    cache: dict[str, ExpertGraph] = {}
    cells = {}
    for tname, task in tasks.items():
        found = {c.name: team for c, team in dc(g, comms, task, threshold, cfg, subgraphs=cache)}
        cells[tname] = {c.name: found.get(c.name) for c in comms}
    return CaseStudy(dict(tasks), [c.name for c in comms], cells)


def case_study_table(cs: CaseStudy, g: ExpertGraph) -> str:
    """Markdown grid: rows communities, columns tasks; ``*`` marks fallback experts."""
    names = list(cs.tasks)
    lines = ["| Network | " + " | ".join(names) + " |", "|---|" + "---|" * len(names)]
    for c in cs.communities:
        cells = []
        for t in names:
            team = cs.cells[t][c]
            if team is None or not team.members:
                cells.append("")
                continue
            extra = team.fallback_experts
            order = [team.leader] + sorted(team.members - {team.leader})
            cells.append(", ".join(g.name(v) + ("*" if v in extra and v != team.leader else "") for v in order))
        lines.append(f"| {c} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
