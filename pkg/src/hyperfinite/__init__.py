"""Local statistics, mass transport checks and bounded-component cuts for bounded-degree graphs."""

from .bs_statistics import (
    CATALOG,
    LocalFunction,
    MTPResult,
    NeighborhoodDistribution,
    local_function,
    mtp_check,
    psi,
    sample_psi,
    tv_distance,
)
from .graph import EdgeListParseError, Graph, InstanceTooLarge, disjoint_union, format_edge_list, parse_edge_list
from .local_transfer import (
    ComponentStats,
    LocalCut,
    RadiusChoice,
    TransferModel,
    TransferReport,
    apply_transfer,
    choose_R,
    derandomize_cut,
    enumerate_connected_sets,
    epsilon_tilde,
    estimate_ptilde,
    local_partition,
    mixture_bounds,
    raw_bound,
    selection_probability,
    train_transfer,
    transfer_experiment,
)
from .partitioners import (
    CutEnsemble,
    PartitionQuality,
    brute_force_optimal_cut,
    build_ensemble,
    format_cut,
    greedy_ball_partition,
    grid_block_cut,
    parse_cut,
    random_shifted_partition,
    verify_partition,
)
from .rooted_graphs import (
    MarkedBall,
    RootedBall,
    RootedDistance,
    ball,
    canonical_code_marked,
    canonical_code_rooted,
    neighborhood_of_set,
    rooted_distance,
)

__version__ = "0.1.0"

__all__ = [
    "apply_transfer",
    "ball",
    "brute_force_optimal_cut",
    "build_ensemble",
    "canonical_code_marked",
    "canonical_code_rooted",
    "CATALOG",
    "choose_R",
    "ComponentStats",
    "CutEnsemble",
    "derandomize_cut",
    "disjoint_union",
    "EdgeListParseError",
    "enumerate_connected_sets",
    "epsilon_tilde",
    "estimate_ptilde",
    "format_cut",
    "format_edge_list",
    "Graph",
    "greedy_ball_partition",
    "grid_block_cut",
    "InstanceTooLarge",
    "local_function",
    "local_partition",
    "LocalCut",
    "LocalFunction",
    "MarkedBall",
    "mixture_bounds",
    "mtp_check",
    "MTPResult",
    "neighborhood_of_set",
    "NeighborhoodDistribution",
    "parse_cut",
    "parse_edge_list",
    "PartitionQuality",
    "psi",
    "RadiusChoice",
    "random_shifted_partition",
    "raw_bound",
    "rooted_distance",
    "RootedBall",
    "RootedDistance",
    "sample_psi",
    "selection_probability",
    "train_transfer",
    "transfer_experiment",
    "TransferModel",
    "TransferReport",
    "tv_distance",
    "verify_partition",
]
