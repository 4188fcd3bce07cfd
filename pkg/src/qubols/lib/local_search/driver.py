from __future__ import annotations

import logging
import math
import time
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np

from qubols.lib.annealer import AnnealerSolver, Solver
from qubols.lib.constants import (
    SA_FINAL_TEMPERATURE_RATIO,
    SA_TEMPERATURE_SAMPLES,
    Method,
    SelectionPolicy,
)
from qubols.lib.local_search.config import RunConfig
from qubols.lib.local_search.exceptions import RunConfigError, UnsupportedMethodError
from qubols.lib.local_search.problem import S, LocalSearchProblem, SubQubo
from qubols.lib.local_search.trace import IterationRecord, RunTrace
from qubols.lib.qubo import evaluate

LOG = logging.getLogger(__name__)

SubQuboBuilder = Callable[[S, SelectionPolicy, np.random.Generator], SubQubo[S]]


class _Streams:
    """Independent random streams of one run, all derived from its seed.

    The initial solution only depends on the seed, so runs of different
    methods with the same seed start from the same solution.
    """

    def __init__(self, seed: int) -> None:
        init, moves, annealer = np.random.SeedSequence(seed).spawn(3)
        self.init = np.random.default_rng(init)
        self.moves = np.random.default_rng(moves)
        self._annealer = annealer

    def annealer_seed(self, iteration: int) -> int:
        sequence = np.random.SeedSequence(
            self._annealer.entropy,
            spawn_key=(*self._annealer.spawn_key, iteration),
        )
        return int(sequence.generate_state(1, dtype=np.uint64)[0])


def initial_solution(problem: LocalSearchProblem[S], cfg: RunConfig) -> S:
    """Starting point every method uses for ``cfg.seed`` and ``cfg.init``."""
    streams = _Streams(cfg.seed)
    return problem.initial_solution(cfg.init, streams.init, cfg.initial)


def _start(
    problem: LocalSearchProblem[S], cfg: RunConfig, streams: _Streams
) -> Tuple[S, Fraction, IterationRecord]:
    tick = time.perf_counter()
    solution = problem.initial_solution(cfg.init, streams.init, cfg.initial)
    objective = problem.objective(solution)
    record = IterationRecord(
        iteration=0,
        objective=objective,
        accepted=True,
        wall_time=time.perf_counter() - tick,
    )
    LOG.debug(f"{problem.name}: initial objective {objective}")
    return solution, objective, record


def _trace(
    problem: LocalSearchProblem[S],
    cfg: RunConfig,
    method: Method,
    initial: S,
    final: S,
    records: List[IterationRecord],
) -> RunTrace:
    return RunTrace(
        instance=problem.name,
        method=method,
        seed=cfg.seed,
        records=tuple(records),
        initial_solution=problem.solution_to_list(initial),
        final_solution=problem.solution_to_list(final),
    )


def qubo_local_search(
    problem: LocalSearchProblem[S],
    cfg: RunConfig,
    build: SubQuboBuilder[S],
    solver: Optional[Solver] = None,
    method: Optional[Method] = None,
) -> RunTrace:
    """Outer loop shared by the QUBO methods.

    Every iteration builds a sub-QUBO around the incumbent, minimizes it and
    keeps the decoded solution only if it is feasible and strictly better.
    A greedy plan only depends on the incumbent, so after a rejected
    iteration the plans are drawn at random until the incumbent changes.
    """
    solver = solver or AnnealerSolver()
    streams = _Streams(cfg.seed)
    solution, objective, first = _start(problem, cfg, streams)
    initial = solution
    records = [first]
    policy = cfg.selection or problem.default_selection
    selection = policy
    for iteration in range(1, cfg.budget() + 1):
        tick = time.perf_counter()
        sub = build(solution, selection, streams.moves)
        if sub.size == 0:
            LOG.debug(f"{problem.name}: empty sub-QUBO, stopping")
            break
        config = cfg.annealer.with_seed(streams.annealer_seed(iteration))
        if cfg.seed_annealer_with_current:
            config = config.with_initial(sub.current)
        result = solver.solve(sub.model, config)
        candidate = sub.decode(result.best)
        candidate_objective = None
        accepted = False
        if candidate is None:
            LOG.warning(f"{problem.name}: iteration {iteration} output is infeasible")
        else:
            candidate_objective = problem.objective(candidate)
            if candidate_objective < objective:
                solution, objective = candidate, candidate_objective
                accepted = True
        selection = policy if accepted else SelectionPolicy.RANDOM
        records.append(
            IterationRecord(
                iteration=iteration,
                objective=objective,
                qubo_size=sub.size,
                annealer_steps=result.steps_used,
                accepted=accepted,
                wall_time=time.perf_counter() - tick,
                candidate_objective=candidate_objective,
                feasible=candidate is not None,
                candidate_energy=result.best_energy,
                incumbent_energy=evaluate(sub.model, sub.current),
            )
        )
        LOG.debug(
            f"{problem.name}: iteration {iteration}, {sub.size} variables, "
            f"objective {objective}{' (accepted)' if accepted else ''}"
        )
    return _trace(problem, cfg, method or cfg.method, initial, solution, records)


def run_uqubols(
    problem: LocalSearchProblem[S], cfg: RunConfig, solver: Optional[Solver] = None
) -> RunTrace:
    capacity = cfg.annealer.capacity
    m = min(cfg.m or problem.default_moves(capacity), capacity)

    def build(
        solution: S, selection: SelectionPolicy, rng: np.random.Generator
    ) -> SubQubo[S]:
        return problem.exchange_qubo(solution, m, selection, rng)

    return qubo_local_search(problem, cfg, build, solver, Method.UQUBOLS)


def _require_subsets(problem: LocalSearchProblem[S]) -> None:
    if not problem.supports_subsets:
        raise UnsupportedMethodError(problem.name, "constrained sub-QUBOs")


def _run_subsets(
    problem: LocalSearchProblem[S],
    cfg: RunConfig,
    k: int,
    m: int,
    solver: Optional[Solver],
    method: Method,
) -> RunTrace:
    def build(
        solution: S, selection: SelectionPolicy, rng: np.random.Generator
    ) -> SubQubo[S]:
        return problem.subset_qubo(solution, k, m, selection, cfg.penalty, rng)

    return qubo_local_search(problem, cfg, build, solver, method)


def subset_count(k: int, m: Optional[int], n: int, capacity: int) -> int:
    """Subsets per C-QUBO-LS iteration: ``m`` clamped to ``k*k*m <= capacity``."""
    fit = min(capacity // (k * k), n // k)
    if fit < 1:
        raise RunConfigError(
            f"Subsets of size {k} need {k * k} variables and {k} facilities, "
            f"have capacity {capacity} and n={n}"
        )
    return fit if m is None else min(m, fit)


def run_cqubols(
    problem: LocalSearchProblem[S], cfg: RunConfig, solver: Optional[Solver] = None
) -> RunTrace:
    _require_subsets(problem)
    if cfg.k < 2:
        raise RunConfigError(f"C-QUBO-LS needs k >= 2, got {cfg.k}")
    m = subset_count(cfg.k, cfg.m, problem.size, cfg.annealer.capacity)
    return _run_subsets(problem, cfg, cfg.k, m, solver, Method.CQUBOLS)


def run_qls(
    problem: LocalSearchProblem[S], cfg: RunConfig, solver: Optional[Solver] = None
) -> RunTrace:
    """C-QUBO-LS with a single subset as large as the annealer allows."""
    _require_subsets(problem)
    k = min(math.isqrt(cfg.annealer.capacity), problem.size)
    return _run_subsets(problem, cfg, k, 1, solver, Method.QLS)


def initial_temperature(
    problem: LocalSearchProblem[S],
    solution: S,
    rng: np.random.Generator,
    samples: int = SA_TEMPERATURE_SAMPLES,
) -> float:
    """Mean absolute objective change of random moves around ``solution``."""
    deltas = [abs(problem.random_move(solution, rng)[1]) for _ in range(samples)]
    return float(sum(deltas, Fraction(0)) / samples) if samples else 0.0


def moves_per_temperature(
    iterations: int,
    cooling: float,
    final_ratio: float = SA_FINAL_TEMPERATURE_RATIO,
) -> int:
    """Moves at each temperature so the schedule spans the whole budget."""
    if cooling >= 1:
        return max(1, iterations)
    steps = math.ceil(math.log(final_ratio) / math.log(cooling))
    return max(1, iterations // steps)


def run_sa_baseline(problem: LocalSearchProblem[S], cfg: RunConfig) -> RunTrace:
    """Simulated annealing over the native solution space with geometric cooling.

    The temperature drops by ``cfg.sa_cooling`` every
    :func:`moves_per_temperature` moves. Records hold the best objective so
    far; ``accepted`` marks a new best and ``candidate_objective`` the
    objective of the current solution.
    """
    streams = _Streams(cfg.seed)
    solution, objective, first = _start(problem, cfg, streams)
    initial = current = best = solution
    current_objective = best_objective = objective
    rng = streams.moves
    temperature = cfg.sa_initial_temperature
    if temperature is None:
        temperature = initial_temperature(problem, solution, rng)
    LOG.debug(f"{problem.name}: simulated annealing from T = {temperature:.6g}")
    iterations = cfg.budget(problem.sa_iterations)
    plateau = moves_per_temperature(iterations, cfg.sa_cooling)
    records = [first]
    for iteration in range(1, iterations + 1):
        tick = time.perf_counter()
        candidate, delta = problem.random_move(current, rng)
        if delta < 0:
            move = True
        elif temperature > 0:
            move = rng.random() < math.exp(-float(delta) / temperature)
        else:
            move = False
        if move:
            current = candidate
            current_objective += delta
        improved = current_objective < best_objective
        if improved:
            best, best_objective = current, current_objective
        if iteration % plateau == 0:
            temperature *= cfg.sa_cooling
        records.append(
            IterationRecord(
                iteration=iteration,
                objective=best_objective,
                accepted=improved,
                wall_time=time.perf_counter() - tick,
                candidate_objective=current_objective,
            )
        )
    LOG.debug(f"{problem.name}: simulated annealing best {best_objective}")
    return _trace(problem, cfg, Method.SA, initial, best, records)


def run(
    problem: LocalSearchProblem[S], cfg: RunConfig, solver: Optional[Solver] = None
) -> RunTrace:
    if cfg.method == Method.UQUBOLS:
        return run_uqubols(problem, cfg, solver)
    if cfg.method == Method.CQUBOLS:
        return run_cqubols(problem, cfg, solver)
    if cfg.method == Method.QLS:
        return run_qls(problem, cfg, solver)
    return run_sa_baseline(problem, cfg)
