"""Team formation on weighted collaboration graphs.

Community-restricted greedy team search (TFC-R, TFC-N and the DC driver),
the RarestFirst, MinSD and MinLD baselines, communication-cost metrics,
DBLP-style ingestion, network diagnostics and an experiment harness.
"""

__version__ = "0.1.0"

from .algorithms import (
    ALGORITHMS,
    AlgorithmConfig,
    dc,
    is_desirable,
    leader_candidates,
    min_ld,
    min_sd,
    rarest_first,
    tfc_candidate,
    tfc_n,
    tfc_r,
)
from .graph import (
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
from .graphio import load_communities, load_graph, save_communities, save_graph
from .metrics import ContractError, CostReport, Task, Team, diameter, evaluate, leader_distance, sum_distance

__all__ = [
    "ALGORITHMS", "AlgorithmConfig", "dc", "is_desirable", "leader_candidates", "min_ld", "min_sd",
    "rarest_first", "tfc_candidate", "tfc_n", "tfc_r",
    "UNREACHABLE", "Community", "Expert", "ExpertGraph", "GraphValidationError", "UnknownExpertError",
    "connected_components", "degree_stats", "hd_set", "k_hop_neighborhood",
    "largest_connected_component", "shortest_path_distance", "single_source_distances",
    "load_communities", "load_graph", "save_communities", "save_graph",
    "ContractError", "CostReport", "Task", "Team", "diameter", "evaluate", "leader_distance",
    "sum_distance", "toy_graph_prefix",
]


def toy_graph_prefix():
    """Path prefix of the bundled 20-expert example graph."""
    from importlib import resources

    return resources.files("teamform.data").joinpath("toy")
