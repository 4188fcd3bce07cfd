from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Generic, Optional, Sequence, Tuple, TypeVar

import numpy as np

from qubols.lib.constants import (
    DEFAULT_SA_ITERATIONS,
    InitPolicy,
    ProblemKind,
    SelectionPolicy,
)
from qubols.lib.local_search.exceptions import RunConfigError, UnsupportedMethodError
from qubols.lib.qubo import BitString, PenaltyConfig, QuboModel

S = TypeVar("S")


@dataclass(frozen=True)
class SubQubo(Generic[S]):
    """A sub-QUBO around the incumbent.

    ``current`` encodes the incumbent; ``decode`` maps an assignment back to a
    solution, or to ``None`` when the assignment violates a constraint.
    """

    model: QuboModel
    current: BitString
    decode: Callable[[Sequence[int]], Optional[S]]

    @property
    def size(self) -> int:
        return self.model.n


class LocalSearchProblem(ABC, Generic[S]):
    """Hooks the driver needs from a problem.

    ``exchange_qubo`` is required by every problem; ``subset_qubo`` and
    ``spectral_solution`` are optional capabilities. ``default_selection``
    and ``sa_iterations`` apply when the run configuration leaves them unset.
    """

    kind: ProblemKind
    supports_subsets = False
    default_selection = SelectionPolicy.GREEDY
    sa_iterations = DEFAULT_SA_ITERATIONS

    def __init__(self, name: str) -> None:
        self.name = name

    @property
    @abstractmethod
    def size(self) -> int:
        raise NotImplementedError()

    @abstractmethod
    def objective(self, solution: S) -> Fraction:
        raise NotImplementedError()

    @abstractmethod
    def random_solution(self, rng: np.random.Generator) -> S:
        raise NotImplementedError()

    def spectral_solution(self) -> S:
        raise UnsupportedMethodError(self.name, "spectral initialization")

    @abstractmethod
    def solution_from_list(self, values: Sequence[int]) -> S:
        raise NotImplementedError()

    @abstractmethod
    def solution_to_list(self, solution: S) -> Tuple[int, ...]:
        raise NotImplementedError()

    def initial_solution(
        self,
        policy: InitPolicy,
        rng: np.random.Generator,
        given: Optional[Sequence[int]] = None,
    ) -> S:
        if policy == InitPolicy.GIVEN:
            if given is None:
                raise RunConfigError("Initial policy 'given' needs an initial solution")
            return self.solution_from_list(given)
        if policy == InitPolicy.SPECTRAL:
            return self.spectral_solution()
        return self.random_solution(rng)

    @abstractmethod
    def default_moves(self, capacity: int) -> int:
        """Number of local changes U-QUBO-LS uses when ``m`` is unset."""
        raise NotImplementedError()

    @abstractmethod
    def exchange_qubo(
        self,
        solution: S,
        m: int,
        selection: SelectionPolicy,
        rng: np.random.Generator,
    ) -> SubQubo[S]:
        """Unconstrained sub-QUBO with one variable per local change."""
        raise NotImplementedError()

    def subset_qubo(
        self,
        solution: S,
        k: int,
        m: int,
        selection: SelectionPolicy,
        penalties: PenaltyConfig,
        rng: np.random.Generator,
    ) -> SubQubo[S]:
        """Penalized sub-QUBO reassigning ``m`` disjoint subsets of size ``k``."""
        raise UnsupportedMethodError(self.name, "constrained sub-QUBOs")

    @abstractmethod
    def random_move(
        self, solution: S, rng: np.random.Generator
    ) -> Tuple[S, Fraction]:
        """Random neighbor and its objective change."""
        raise NotImplementedError()
