from qubols.lib.annealer.brute_force import brute_force_solve
from qubols.lib.annealer.config import AnnealerConfig, AnnealResult, temperature_ladder
from qubols.lib.annealer.exceptions import (
    AnnealerConfigError,
    AnnealerError,
    CapacityExceededError,
)
from qubols.lib.annealer.sampler import (
    ReplicaState,
    metropolis_sweep,
    replica_exchange,
    solve,
)
from qubols.lib.annealer.solver import AnnealerSolver, BruteForceSolver, Solver

__all__ = [
    "AnnealResult",
    "AnnealerConfig",
    "AnnealerConfigError",
    "AnnealerError",
    "AnnealerSolver",
    "BruteForceSolver",
    "CapacityExceededError",
    "ReplicaState",
    "Solver",
    "brute_force_solve",
    "metropolis_sweep",
    "replica_exchange",
    "solve",
    "temperature_ladder",
]
