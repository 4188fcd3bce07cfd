from qubols.lib.qubo.exceptions import (
    DimensionError,
    FormulationError,
    QuboError,
    VariableIndexError,
)
from qubols.lib.qubo.fixing import fix_variables, free_variables
from qubols.lib.qubo.ising import (
    IsingModel,
    bits_to_spins,
    evaluate_ising,
    ising_to_qubo,
    qubo_to_ising,
    spins_to_bits,
)
from qubols.lib.qubo.model import (
    BitString,
    Edge,
    QuboModel,
    as_bits,
    bits_from_int,
    delta_flip,
    evaluate,
    flip_bound,
    quantize,
)
from qubols.lib.qubo.penalties import (
    PenaltyConfig,
    add_cardinality_penalties,
    add_one_hot_penalties,
    default_penalty,
    two_way_one_hot_groups,
)

__all__ = [
    "BitString",
    "DimensionError",
    "Edge",
    "FormulationError",
    "IsingModel",
    "PenaltyConfig",
    "QuboError",
    "QuboModel",
    "VariableIndexError",
    "add_cardinality_penalties",
    "add_one_hot_penalties",
    "as_bits",
    "bits_from_int",
    "bits_to_spins",
    "default_penalty",
    "delta_flip",
    "evaluate",
    "evaluate_ising",
    "fix_variables",
    "flip_bound",
    "free_variables",
    "ising_to_qubo",
    "quantize",
    "qubo_to_ising",
    "spins_to_bits",
    "two_way_one_hot_groups",
]
