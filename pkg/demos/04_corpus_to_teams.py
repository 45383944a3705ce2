"""
From a bibliography export to per-community teams
=================================================

A handful of DBLP-style records become an expert graph: authors with at
least three papers, edges for pairs with three joint papers, and skills
from title words seen at least twice. Each venue then gets its own team
for the same task whenever it holds enough of the skills.
"""

from pathlib import Path

from teamform.bench import case_study_table, run_case_study
from teamform.ingest import VenueConfig, build_graph, parse_corpus, title_skills
from teamform.metrics import Task

corpus = Path(__file__).resolve().parents[1] / "tests" / "data" / "mini_dblp.xml"
config = VenueConfig.load()
records = parse_corpus(corpus, config)
print(f"{len(records)} records kept from configured venues")

g, communities = build_graph(records, config)
for v in g.ids:
    print(f"  {g.name(v):<10} skills {sorted(g.skills(v))}")
for u, v, w in g.edges():
    print(f"  edge {g.name(u)} - {g.name(v)}: {w:.6f}")

# A task is the stemmed title of a paper nobody has written yet.
task = Task(tuple(title_skills("Probabilistic Query Ranking over Graph Streams")))
print("task skills:", task.skills)

populated = [c for c in communities if c.members]
study = run_case_study(g, populated, {"T": task}, threshold=0.6, network_name="ALL")
print(case_study_table(study, g))
