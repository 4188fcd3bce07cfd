from __future__ import annotations

from abc import ABC, abstractmethod

from qubols.lib.annealer.brute_force import brute_force_solve
from qubols.lib.annealer.config import AnnealerConfig, AnnealResult
from qubols.lib.annealer.exceptions import CapacityExceededError
from qubols.lib.annealer.sampler import solve
from qubols.lib.qubo import QuboModel


class Solver(ABC):
    """Minimizes sub-QUBOs for the local search driver."""

    name: str = "solver"

    @abstractmethod
    def solve(self, model: QuboModel, config: AnnealerConfig) -> AnnealResult:
        raise NotImplementedError()


class AnnealerSolver(Solver):
    name = "annealer"

    def solve(self, model: QuboModel, config: AnnealerConfig) -> AnnealResult:
        return solve(model, config)


class BruteForceSolver(Solver):
    """Exact solver honoring the same capacity limit as the annealer."""

    name = "brute-force"

    def solve(self, model: QuboModel, config: AnnealerConfig) -> AnnealResult:
        if model.n > config.capacity:
            raise CapacityExceededError(model.n, config.capacity)
        return brute_force_solve(model)
