"""Command-line entry point: ``teamform <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data or contract error (including
partial coverage under ``--strict``). Machine output goes to stdout,
diagnostics to stderr. ``TEAMFORM_OUT`` sets the default output directory.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .algorithms import ALGORITHMS, AlgorithmConfig, dc
from .analysis import (
    collaborator_ratio,
    component_size_distribution,
    cumulative_skill_coverage,
    degree_distribution,
    network_statistics,
    statistics_rows,
)
from .bench import ExperimentPlan, case_study_table, load_tasks, run_benchmark, run_case_study, write_report
from .graph import ExpertGraph, GraphValidationError, UnknownExpertError
from .graphio import GraphFormatError, load_communities, load_graph, save_communities, save_graph
from .ingest import CorpusParseError, VenueConfig, build_graph, parse_corpus
from .metrics import ContractError, Task, Team, evaluate
from .synthetic import nested_powerlaw_graph

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger("teamform")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; this tool reserves 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _default_out() -> str:
    return os.environ.get("TEAMFORM_OUT", "out")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="teamform", description="Team formation on weighted collaboration graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help="TOML file; top-level keys and [<subcommand>] tables set flag defaults")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more logging on stderr (repeatable)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("ingest", help="build an expert graph from DBLP-style XML")
    s.add_argument("--xml", required=True, help="XML export (.xml or .xml.gz)")
    s.add_argument("--venues", help="TOML [areas] table; bundled default when omitted")
    s.add_argument("--out", required=True, help="output prefix for .nodes/.edges/.skills/.communities")
    s.add_argument("--min-pubs", type=int, default=3)
    s.add_argument("--min-joint", type=int, default=3)
    s.add_argument("--min-skill-count", type=int, default=2)
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("analyze", help="degree, component and skill-coverage diagnostics")
    s.add_argument("--graph", required=True, help="graph file prefix")
    s.add_argument("--communities", help="community file (default <prefix>.communities if present)")
    s.add_argument("--community", help="restrict skill coverage to this community")
    s.add_argument("--hops-max", type=int, default=3)
    s.add_argument("--hd-degree-factor", type=float, default=2.0)
    s.add_argument("--out", default=None, help="output directory (default $TEAMFORM_OUT or ./out)")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("team", help="form one team for a task")
    s.add_argument("--algo", required=True, choices=sorted(ALGORITHMS))
    s.add_argument("--task", required=True, help='comma-separated skills, e.g. "a,b,c"')
    s.add_argument("--graph", required=True, help="graph file prefix")
    s.add_argument("--seed", "--rng-seed", dest="rng_seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--hops", "--hop-limit", dest="hop_limit", type=int, default=2)
    s.add_argument("--hd-degree-factor", type=float, default=2.0)
    s.add_argument("--communities", help="run DC over these communities (TFC algorithms only)")
    s.add_argument("--threshold", type=float, default=0.9)
    s.add_argument("--strict", action="store_true", help="exit 2 unless every task skill is covered")
    s.set_defaults(func=cmd_team)

    s = sub.add_parser("bench", help="run the experimental protocol")
    s.add_argument("--plan", help="TOML plan ([plan] table or top-level keys)")
    s.add_argument("--graphs", required=True,
                   help="comma-separated name:prefix or name:prefix#community entries")
    s.add_argument("--trials", type=int)
    s.add_argument("--k-range", help="LO..HI")
    s.add_argument("--algorithms", help="comma-separated algorithm names")
    s.add_argument("--task-source", help="graph name whose skills tasks are drawn from")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("case-study", help="DC per task over every community")
    s.add_argument("--graph", required=True)
    s.add_argument("--communities", help="community file (default <prefix>.communities)")
    s.add_argument("--tasks", required=True, help="TOML with [tasks.NAME] tables")
    s.add_argument("--threshold", type=float, default=0.9)
    s.add_argument("--seed", "--rng-seed", dest="rng_seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--network-name", default="DBLP", help="label for the whole-graph row; empty to omit")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_case_study)

    s = sub.add_parser("synth", help="write a synthetic power-law graph with nested communities")
    s.add_argument("--sizes", default="1000,5000,25000")
    s.add_argument("--names", default="VLDB,DB,DBLP")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--out", required=True, help="output prefix")
    s.set_defaults(func=cmd_synth)
    return p


# -- helpers -------------------------------------------------------------------


def _out_dir(args) -> Path:
    out = Path(args.out or _default_out())
    out.mkdir(parents=True, exist_ok=True)
    return out


def _communities_for(prefix: str, path: str | None):
    if path:
        return load_communities(path)
    default = Path(f"{prefix}.communities")
    return load_communities(default) if default.exists() else []


def _algo_config(args) -> AlgorithmConfig:
    return AlgorithmConfig(
        rng_seed=args.rng_seed,
        hop_limit=args.hop_limit,
        hd_degree_factor=args.hd_degree_factor,
        variant=args.algo if args.algo in ("tfc-r", "tfc-n") else "tfc-r",
    )


def team_record(g: ExpertGraph, algo: str, task: Task, team: Team, community: str | None = None) -> dict:
    """JSON-ready summary of one team (names, not ids)."""
    rep = evaluate(g, team, task)
    rec = {
        "algorithm": algo,
        "task": list(task.skills),
        "leader": g.name(team.leader) if team.leader is not None else None,
        "members": sorted(g.name(v) for v in team.members),
        "assignment": {s: g.name(team.assignment[s]) for s in task.skills if s in team.assignment},
        "fallback": sorted(g.name(v) for v in team.fallback_experts),
        "cardinality": rep.cardinality,
        "diameter": rep.diameter,
        "sum_distance": rep.sum_distance,
        "leader_distance": None if rep.leader_distance != rep.leader_distance else rep.leader_distance,
        "covered": rep.covered,
    }
    if community is not None:
        rec = {"community": community, **rec}
    return rec


def _human_table(rec: dict) -> str:
    rows = [("community", rec.get("community"))] if "community" in rec else []
    rows += [
        ("leader", rec["leader"]),
        ("members", ", ".join(rec["members"])),
        *[(f"  {s}", v + (" *" if v in rec["fallback"] else "")) for s, v in rec["assignment"].items()],
        ("cardinality", rec["cardinality"]),
        ("diameter", rec["diameter"]),
        ("sum distance", rec["sum_distance"]),
        ("leader distance", rec["leader_distance"]),
        ("coverage", rec["covered"]),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


# -- subcommands ---------------------------------------------------------------


def cmd_ingest(args) -> int:
    config = VenueConfig.load(args.venues)
    records = parse_corpus(args.xml, config)
    g, comms = build_graph(records, config, args.min_pubs, args.min_joint, args.min_skill_count)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    save_graph(g, args.out)
    save_communities(comms, f"{args.out}.communities")
    named = {"ALL": g, **{c.name: g.subgraph(c.members) for c in comms if c.members}}
    with open(f"{args.out}.stats.csv", "w", encoding="utf-8", newline="\n") as fh:
        for row in statistics_rows(named):
            fh.write(",".join(row) + "\n")
    print(json.dumps({"records": len(records), "experts": len(g), "edges": g.n_edges,
                      "skills": len(g.skill_universe), "communities": len(comms)}))
    return EXIT_OK


def cmd_analyze(args) -> int:
    g = load_graph(args.graph)
    out = _out_dir(args)
    community = None
    if args.community:
        comms = {c.name: c for c in _communities_for(args.graph, args.communities)}
        if args.community not in comms:
            raise DataError(f"unknown community {args.community!r}")
        community = comms[args.community]

    def write(name, comment, header, rows):
        with open(out / name, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# {comment}\n{header}\n")
            for r in rows:
                fh.write(",".join(str(x) for x in r) + "\n")

    write("degree_distribution.csv", "x = degree, count = number of experts with that degree",
          "degree,count", degree_distribution(g).rows())
    write("component_sizes.csv", "x = connected component size, count = number of components",
          "size,count", component_size_distribution(g).rows())
    high, low = collaborator_ratio(g, args.hd_degree_factor)
    write("collaborator_ratio.csv", f"high = degree > {args.hd_degree_factor} x average degree",
          "high,low", [(high, low)])
    stats = network_statistics(g)
    write("network_statistics.csv", "V experts, E edges, S distinct skills, d_avg average degree",
          ",".join(stats), [tuple(f"{v:.6g}" for v in stats.values())])
    cov = cumulative_skill_coverage(g, community, args.hops_max)
    hops = ",".join(f"hop{h}" for h in range(cov.hops_max + 1))
    scope = community.name if community else "whole graph"
    write("skill_coverage_per_degree.csv",
          f"mean cumulative fraction of {scope} skills within h hops, grouped by degree",
          f"degree,{hops}",
          [(d, *(f"{x:.6f}" for x in row)) for d, row in cov.per_degree.items()])
    write("skill_coverage_per_node.csv", f"cumulative fraction of {scope} skills within h hops",
          f"id,degree,{hops}",
          [(v, cov.degree[v], *(f"{x:.6f}" for x in row)) for v, row in sorted(cov.per_node.items())])
    print(json.dumps({"out": str(out), **stats, "high": high, "low": low}))
    return EXIT_OK


def cmd_team(args) -> int:
    g = load_graph(args.graph)
    task = Task.parse(args.task)
    cfg = _algo_config(args)
    if args.communities:
        if args.algo not in ("tfc-r", "tfc-n"):
            raise UsageError("--communities runs DC, which needs --algo tfc-r or tfc-n")
        results = [(c.name, t) for c, t in dc(g, load_communities(args.communities), task, args.threshold, cfg)]
        if not results:
            log.warning("no community reaches the %.2f coverage threshold", args.threshold)
    else:
        results = [(None, ALGORITHMS[args.algo](g, task, cfg))]
    records = [team_record(g, args.algo, task, team, name) for name, team in results]
    for rec in records:
        print(json.dumps(rec, sort_keys=False))
    for rec in records:
        print(_human_table(rec))
    if args.strict and (not records or any(r["covered"] < 1.0 for r in records)):
        missing = [s for s in task.skills if not g.skill_support(s)]
        print(f"strict: coverage below 1.0; skills with no holder: {missing}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def _parse_graph_specs(spec: str) -> dict[str, ExpertGraph]:
    graphs: dict[str, ExpertGraph] = {}
    cache: dict[str, ExpertGraph] = {}
    for item in filter(None, (x.strip() for x in spec.split(","))):
        if ":" not in item:
            raise UsageError(f"graph entry {item!r} must be name:prefix[#community]")
        name, rest = item.split(":", 1)
        prefix, _, comm = rest.partition("#")
        if prefix not in cache:
            cache[prefix] = load_graph(prefix)
        g = cache[prefix]
        if comm:
            comms = {c.name: c for c in _communities_for(prefix, None)}
            if comm not in comms:
                raise DataError(f"community {comm!r} not found for {prefix}")
            g = g.subgraph(comms[comm].members)
        graphs[name] = g
    if not graphs:
        raise UsageError("--graphs is empty")
    return graphs


def cmd_bench(args) -> int:
    data: dict = {}
    if args.plan:
        with open(args.plan, "rb") as fh:
            raw = tomllib.load(fh)
        data = dict(raw.get("plan", raw))
    if args.trials is not None:
        data["trials"] = args.trials
    if args.k_range:
        lo, _, hi = args.k_range.partition("..")
        data["k_range"] = (int(lo), int(hi or lo))
    if args.algorithms:
        data["algorithms"] = [a.strip() for a in args.algorithms.split(",")]
    if args.task_source:
        data["task_source"] = args.task_source
    if args.seed is not None:
        data["seed"] = args.seed
    try:
        plan = ExperimentPlan.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad plan: {exc}") from None
    graphs = _parse_graph_specs(args.graphs)
    out = _out_dir(args)
    report = run_benchmark(plan, graphs, progress=log.info)
    for p in write_report(report, out):
        print(p)
    return EXIT_OK


def cmd_case_study(args) -> int:
    g = load_graph(args.graph)
    comms = _communities_for(args.graph, args.communities)
    tasks = load_tasks(args.tasks)
    cfg = AlgorithmConfig(rng_seed=args.rng_seed)
    cs = run_case_study(g, comms, tasks, args.threshold, cfg, args.network_name or None)
    table = case_study_table(cs, g)
    out = _out_dir(args)
    (out / "case_study.md").write_text(table, encoding="utf-8")
    sys.stdout.write(table)
    return EXIT_OK


def cmd_synth(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",")]
    names = [x.strip() for x in args.names.split(",")]
    try:
        g, comms = nested_powerlaw_graph(sizes, names, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    save_graph(g, args.out)
    save_communities(comms, f"{args.out}.communities")
    print(json.dumps({"experts": len(g), "edges": g.n_edges, "communities": [c.name for c in comms]}))
    return EXIT_OK


# -- dispatch -------------------------------------------------------------------


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read config: {exc}") from None
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    flat = {k.replace("-", "_"): v for k, v in data.items() if not isinstance(v, dict)}
    for name, sp in subparsers.choices.items():
        section = {k.replace("-", "_"): v for k, v in data.get(name, {}).items()}
        dests = {a.dest for a in sp._actions}
        values = {k: v for k, v in {**flat, **section}.items() if k in dests}
        unknown = set(section) - dests
        if unknown:
            raise UsageError(f"unknown keys in [{name}]: {sorted(unknown)}")
        if values:
            sp.set_defaults(**values)
            for a in sp._actions:  # config satisfies a required flag
                if a.dest in values:
                    a.required = False


def dispatch(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
            format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )
        if not getattr(args, "command", None):
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError, GraphFormatError, GraphValidationError, CorpusParseError,
            ContractError, UnknownExpertError, ValueError) as exc:
        print(f"teamform: error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
