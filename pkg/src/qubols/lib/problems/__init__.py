from qubols.lib.problems.exceptions import (
    InvalidInstanceError,
    InvalidMoveError,
    InvalidSolutionError,
    ParseError,
    ProblemError,
)
from qubols.lib.problems.graph import (
    WeightedGraph,
    generate_graph,
    laplacian,
    parse_dimacs,
    parse_edge_list,
    parse_graph,
)
from qubols.lib.problems.graph_partition import (
    Partition,
    SwapMatching,
    apply_swaps,
    balanced_partition,
    build_swap_qubo,
    cut_value,
    full_gp_qubo,
    kl_gain,
    parse_partition,
    random_balanced_partition,
    select_swap_matching,
    serialize_partition,
)
from qubols.lib.problems.m2sp import (
    Ordering,
    m2sp_to_qap,
    spectral_ordering,
    two_sum_objective,
)
from qubols.lib.problems.permutation import Permutation
from qubols.lib.problems.qap import (
    ExchangePlan,
    QapInstance,
    SubsetFamily,
    greedy_select_pairs,
    pair_exchange_delta,
    parse_best_known,
    parse_qaplib,
    qap_objective,
    random_qap_instance,
    serialize_qaplib,
)
from qubols.lib.problems.qap_qubo import (
    build_cqubols_qubo,
    build_uqubols_qubo,
    decode_cqubols,
    decode_uqubols,
    full_qubo,
)
from qubols.lib.problems.tsp import (
    SegmentDecomposition,
    Tour,
    TspInstance,
    apply_reversals,
    build_k_reversal_qubo,
    decompose,
    parse_coordinates,
    parse_distance_matrix,
    random_tsp_instance,
    tour_length,
)

__all__ = [
    "ExchangePlan",
    "InvalidInstanceError",
    "InvalidMoveError",
    "InvalidSolutionError",
    "Ordering",
    "ParseError",
    "Partition",
    "Permutation",
    "ProblemError",
    "QapInstance",
    "SegmentDecomposition",
    "SubsetFamily",
    "SwapMatching",
    "Tour",
    "TspInstance",
    "WeightedGraph",
    "apply_reversals",
    "apply_swaps",
    "balanced_partition",
    "build_cqubols_qubo",
    "build_k_reversal_qubo",
    "build_swap_qubo",
    "build_uqubols_qubo",
    "cut_value",
    "decode_cqubols",
    "decode_uqubols",
    "decompose",
    "full_gp_qubo",
    "full_qubo",
    "generate_graph",
    "greedy_select_pairs",
    "kl_gain",
    "laplacian",
    "m2sp_to_qap",
    "pair_exchange_delta",
    "parse_best_known",
    "parse_coordinates",
    "parse_dimacs",
    "parse_distance_matrix",
    "parse_edge_list",
    "parse_graph",
    "parse_partition",
    "parse_qaplib",
    "qap_objective",
    "random_balanced_partition",
    "random_qap_instance",
    "random_tsp_instance",
    "select_swap_matching",
    "serialize_partition",
    "serialize_qaplib",
    "spectral_ordering",
    "tour_length",
    "two_sum_objective",
]
