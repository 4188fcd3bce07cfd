"""Problem adapters exposing the local search hooks."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from qubols.lib.constants import M2SP_SA_ITERATIONS, ProblemKind, SelectionPolicy
from qubols.lib.local_search.problem import S, LocalSearchProblem, SubQubo
from qubols.lib.problems import (
    InvalidInstanceError,
    Ordering,
    Partition,
    Permutation,
    QapInstance,
    Tour,
    TspInstance,
    WeightedGraph,
    apply_reversals,
    apply_swaps,
    build_cqubols_qubo,
    build_k_reversal_qubo,
    build_swap_qubo,
    build_uqubols_qubo,
    cut_value,
    decode_cqubols,
    decompose,
    greedy_select_pairs,
    kl_gain,
    m2sp_to_qap,
    pair_exchange_delta,
    qap_objective,
    random_balanced_partition,
    select_swap_matching,
    spectral_ordering,
    tour_length,
    two_sum_objective,
)
from qubols.lib.problems.graph_partition import random_swap_matching
from qubols.lib.problems.qap import (
    greedy_select_subsets,
    random_select_pairs,
    random_select_subsets,
)
from qubols.lib.problems.qap_qubo import cqubols_current_bits
from qubols.lib.problems.tsp import random_cut_positions, two_opt_delta, two_opt_move
from qubols.lib.qubo import PenaltyConfig, QuboModel
from qubols.lib.utils import to_fraction


def _unchanged(solution: S) -> SubQubo[S]:
    return SubQubo(QuboModel.zero(0), (), lambda _bits: solution)


class QapProblem(LocalSearchProblem[Permutation]):
    kind = ProblemKind.QAP
    supports_subsets = True

    def __init__(self, instance: QapInstance, name: str = "") -> None:
        super().__init__(name or instance.name or "qap")
        self.instance = instance

    @property
    def size(self) -> int:
        return self.instance.n

    def objective(self, solution: Permutation) -> Fraction:
        return qap_objective(self.instance, solution)

    def random_solution(self, rng: np.random.Generator) -> Permutation:
        return Permutation.random(self.size, rng)

    def solution_from_list(self, values: Sequence[int]) -> Permutation:
        return Permutation(tuple(values))

    def solution_to_list(self, solution: Permutation) -> Tuple[int, ...]:
        return solution.image

    def default_moves(self, capacity: int) -> int:
        return min(capacity, self.size // 2)

    def exchange_qubo(
        self,
        solution: Permutation,
        m: int,
        selection: SelectionPolicy,
        rng: np.random.Generator,
    ) -> SubQubo[Permutation]:
        if self.size < 2:
            return _unchanged(solution)
        if selection == SelectionPolicy.GREEDY:
            plan = greedy_select_pairs(self.instance, solution, m)
        else:
            plan = random_select_pairs(solution, m, rng)
        model = build_uqubols_qubo(self.instance, plan)
        return SubQubo(model, (0,) * plan.m, plan.decode)

    def subset_qubo(
        self,
        solution: Permutation,
        k: int,
        m: int,
        selection: SelectionPolicy,
        penalties: PenaltyConfig,
        rng: np.random.Generator,
    ) -> SubQubo[Permutation]:
        if selection == SelectionPolicy.GREEDY:
            family = greedy_select_subsets(self.instance, solution, k, m)
        else:
            family = random_select_subsets(self.size, k, m, rng)
        model = build_cqubols_qubo(self.instance, family, solution, penalties)
        return SubQubo(
            model,
            cqubols_current_bits(family),
            lambda bits: decode_cqubols(family, solution, bits),
        )

    def random_move(
        self, solution: Permutation, rng: np.random.Generator
    ) -> Tuple[Permutation, Fraction]:
        if self.size < 2:
            return solution, Fraction(0)
        a, b = sorted(int(f) for f in rng.choice(self.size, size=2, replace=False))
        delta = pair_exchange_delta(self.instance, solution, a, b)
        return solution.swapped(a, b), delta


class M2spProblem(QapProblem):
    """Minimum 2-sum solved through its QAP reduction."""

    kind = ProblemKind.M2SP
    sa_iterations = M2SP_SA_ITERATIONS

    def __init__(self, graph: WeightedGraph, name: str = "") -> None:
        super().__init__(m2sp_to_qap(graph), name or graph.name or "m2sp")
        self.graph = graph

    def objective(self, solution: Ordering) -> Fraction:
        return two_sum_objective(self.graph, solution)

    def spectral_solution(self) -> Ordering:
        return spectral_ordering(self.graph)


def longest_edge_cuts(
    instance: TspInstance, tour: Tour, k: int
) -> Tuple[int, ...]:
    """Positions of the ``k`` longest tour edges, ties by position."""
    order = np.asarray(tour.order, dtype=np.intp)
    lengths = instance.dist[order, np.roll(order, -1)]
    ranked = sorted(range(tour.n), key=lambda c: (-to_fraction(lengths[c]), c))
    return tuple(sorted(ranked[:k]))


class TspProblem(LocalSearchProblem[Tour]):
    kind = ProblemKind.TSP
    default_selection = SelectionPolicy.RANDOM

    def __init__(self, instance: TspInstance, name: str = "") -> None:
        super().__init__(name or instance.name or "tsp")
        self.instance = instance

    @property
    def size(self) -> int:
        return self.instance.n

    def objective(self, solution: Tour) -> Fraction:
        return tour_length(self.instance, solution)

    def random_solution(self, rng: np.random.Generator) -> Tour:
        return Tour.random(self.size, rng)

    def solution_from_list(self, values: Sequence[int]) -> Tour:
        return Tour(tuple(values))

    def solution_to_list(self, solution: Tour) -> Tuple[int, ...]:
        return solution.order

    def default_moves(self, capacity: int) -> int:
        # segments of about sqrt(n) cities each
        return min(capacity, self.size, max(2, math.isqrt(self.size)))

    def exchange_qubo(
        self,
        solution: Tour,
        m: int,
        selection: SelectionPolicy,
        rng: np.random.Generator,
    ) -> SubQubo[Tour]:
        k = min(m, self.size)
        if k < 2:
            return _unchanged(solution)
        if selection == SelectionPolicy.GREEDY:
            cuts = longest_edge_cuts(self.instance, solution, k)
        else:
            cuts = random_cut_positions(self.size, k, rng)
        decomposition = decompose(solution, cuts)
        qubo = build_k_reversal_qubo(self.instance, decomposition)
        return SubQubo(
            qubo.model,
            (0,) * decomposition.k,
            lambda y: apply_reversals(decomposition, y),
        )

    def random_move(
        self, solution: Tour, rng: np.random.Generator
    ) -> Tuple[Tour, Fraction]:
        n = self.size
        if n < 4:
            return solution, Fraction(0)
        i, j = sorted(int(c) for c in rng.choice(n, size=2, replace=False))
        return two_opt_move(solution, i, j), two_opt_delta(
            self.instance, solution, i, j
        )


class PartitionProblem(LocalSearchProblem[Partition]):
    """Perfectly balanced ``k``-way partitioning minimizing the cut."""

    kind = ProblemKind.GP

    def __init__(self, graph: WeightedGraph, k: int = 2, name: str = "") -> None:
        if k < 1 or graph.n % k:
            raise InvalidInstanceError(
                f"{graph.n} vertices cannot be split into {k} equal parts"
            )
        super().__init__(name or graph.name or "gp")
        self.graph = graph
        self.k = k

    @property
    def size(self) -> int:
        return self.graph.n

    def objective(self, solution: Partition) -> Fraction:
        return cut_value(self.graph, solution)

    def random_solution(self, rng: np.random.Generator) -> Partition:
        return random_balanced_partition(self.size, self.k, rng)

    def spectral_solution(self) -> Partition:
        """Consecutive blocks of the spectral ordering."""
        positions = spectral_ordering(self.graph)
        block = self.size // self.k
        return Partition.balanced(
            tuple(positions[u] // block for u in range(self.size)), self.k
        )

    def solution_from_list(self, values: Sequence[int]) -> Partition:
        return Partition.balanced(tuple(values), self.k)

    def solution_to_list(self, solution: Partition) -> Tuple[int, ...]:
        return solution.assignment

    def default_moves(self, capacity: int) -> int:
        return min(capacity, self.size // 2)

    def exchange_qubo(
        self,
        solution: Partition,
        m: int,
        selection: SelectionPolicy,
        rng: np.random.Generator,
    ) -> SubQubo[Partition]:
        if self.k < 2:
            return _unchanged(solution)
        if selection == SelectionPolicy.GREEDY:
            matching = select_swap_matching(self.graph, solution, m)
        else:
            matching = random_swap_matching(self.graph, solution, m, rng)
        model = build_swap_qubo(self.graph, solution, matching)
        return SubQubo(
            model,
            (0,) * len(matching),
            lambda y: apply_swaps(solution, matching, y),
        )

    def random_move(
        self, solution: Partition, rng: np.random.Generator
    ) -> Tuple[Partition, Fraction]:
        if self.k < 2:
            return solution, Fraction(0)
        u = int(rng.integers(self.size))
        others = [v for v in range(self.size) if solution[v] != solution[u]]
        v = others[int(rng.integers(len(others)))]
        labels = list(solution.assignment)
        labels[u], labels[v] = labels[v], labels[u]
        return Partition(tuple(labels), self.k), -kl_gain(self.graph, solution, u, v)
