import dataclasses
import itertools
import math
import statistics

import numpy as np
import pytest

from qubols.lib.annealer import (
    AnnealerConfig,
    AnnealResult,
    BruteForceSolver,
    Solver,
)
from qubols.lib.constants import (
    SA_FINAL_TEMPERATURE_RATIO,
    InitPolicy,
    Method,
    SelectionPolicy,
)
from qubols.lib.local_search import (
    M2spProblem,
    PartitionProblem,
    QapProblem,
    RunConfig,
    RunConfigError,
    TspProblem,
    UnsupportedMethodError,
    initial_temperature,
    moves_per_temperature,
    run,
    run_cqubols,
    run_qls,
    run_sa_baseline,
    run_uqubols,
    subset_count,
)
from qubols.lib.problems import (
    Permutation,
    WeightedGraph,
    generate_graph,
    greedy_select_pairs,
    qap_objective,
    random_qap_instance,
    random_tsp_instance,
)
from qubols.lib.problems.qap import greedy_select_subsets
from qubols.lib.qubo import evaluate

FAST_ANNEALER = AnnealerConfig(mc_steps=2_000, num_replicas=4)


class ZeroSolver(Solver):
    """Always answers with the all-zero assignment."""

    name = "zero"

    def solve(self, model, config):
        bits = (0,) * model.n
        energy = evaluate(model, bits)
        return AnnealResult(bits, energy, ((0, energy),), 0)


def qap_problem(seed, n):
    return QapProblem(random_qap_instance(n, np.random.default_rng(seed)))


def optimum(problem):
    return min(
        problem.objective(Permutation(image))
        for image in itertools.permutations(range(problem.size))
    )


def assert_monotone(trace):
    objectives = [record.objective for record in trace.records]
    assert all(b <= a for a, b in zip(objectives, objectives[1:]))
    accepted = trace.accepted_objectives
    assert all(b < a for a, b in zip(accepted, accepted[1:]))
    assert trace.final_objective == objectives[-1]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"k": 0},
        {"m": 0},
        {"max_iters": -1},
        {"init": InitPolicy.GIVEN},
        {"method": Method.CQUBOLS, "k": 1},
        {"sa_cooling": 0},
        {"sa_cooling": 1.5},
        {"sa_initial_temperature": -1.0},
        {"seed": -1},
    ],
)
def test_run_config_rejects(kwargs):
    with pytest.raises(RunConfigError):
        RunConfig(**kwargs)


def test_default_budgets():
    assert RunConfig().budget() == 30
    assert RunConfig(method=Method.SA).budget() == 10_000
    assert RunConfig(method=Method.SA, max_iters=5).budget() == 5
    m2sp = M2spProblem(generate_graph("path", 4))
    assert RunConfig(method=Method.SA).budget(m2sp.sa_iterations) == 15_000
    assert RunConfig().budget(m2sp.sa_iterations) == 30
    assert qap_problem(0, 4).sa_iterations == 10_000


def test_m2sp_simulated_annealing_uses_its_own_budget():
    problem = M2spProblem(generate_graph("path", 5))
    trace = run_sa_baseline(problem, RunConfig(method=Method.SA))
    assert trace.iterations == 15_000


def test_cooling_steps_span_the_budget():
    plateau = moves_per_temperature(10_000, 0.995)
    assert plateau == 7
    final = 0.995 ** (10_000 // plateau)
    assert SA_FINAL_TEMPERATURE_RATIO / 2 < final <= SA_FINAL_TEMPERATURE_RATIO
    assert moves_per_temperature(100, 0.995) == 1
    assert moves_per_temperature(500, 1.0) == 500


class RecordingSelection:
    """Problem mixin remembering the selection policy of every sub-QUBO."""

    def exchange_qubo(self, solution, m, selection, rng):
        self.selections.append(selection)
        return super().exchange_qubo(solution, m, selection, rng)


class RecordingQap(RecordingSelection, QapProblem):
    def __init__(self, instance):
        super().__init__(instance)
        self.selections = []


class RecordingTsp(RecordingSelection, TspProblem):
    def __init__(self, instance):
        super().__init__(instance)
        self.selections = []


def test_rejected_iteration_draws_a_random_plan():
    problem = RecordingQap(random_qap_instance(8, np.random.default_rng(3)))
    run_uqubols(problem, RunConfig(max_iters=4), ZeroSolver())
    assert problem.selections == [
        SelectionPolicy.GREEDY,
        SelectionPolicy.RANDOM,
        SelectionPolicy.RANDOM,
        SelectionPolicy.RANDOM,
    ]


def test_accepted_iteration_returns_to_the_configured_policy():
    problem = RecordingQap(random_qap_instance(8, np.random.default_rng(4)))
    cfg = RunConfig(max_iters=6, seed=2, annealer=FAST_ANNEALER)
    trace = run_uqubols(problem, cfg)
    assert problem.selections[0] == SelectionPolicy.GREEDY
    for record, selection in zip(trace.records[1:], problem.selections[1:]):
        expected = SelectionPolicy.GREEDY if record.accepted else SelectionPolicy.RANDOM
        assert selection == expected


def test_tours_cut_at_random_by_default():
    problem = RecordingTsp(random_tsp_instance(10, np.random.default_rng(5)))
    assert problem.default_selection == SelectionPolicy.RANDOM
    run_uqubols(problem, RunConfig(max_iters=3), ZeroSolver())
    assert problem.selections == [SelectionPolicy.RANDOM] * 3
    greedy = RecordingTsp(random_tsp_instance(10, np.random.default_rng(5)))
    run_uqubols(greedy, RunConfig(max_iters=1, selection="greedy"), ZeroSolver())
    assert greedy.selections == [SelectionPolicy.GREEDY]


def test_method_strings_are_accepted():
    cfg = RunConfig(method="qls", init="random", selection="random")
    assert cfg.method == Method.QLS
    assert cfg.selection == SelectionPolicy.RANDOM


@pytest.mark.parametrize("method", list(Method))
def test_zero_iterations_keeps_initial(method):
    problem = qap_problem(0, 6)
    trace = run(problem, RunConfig(method=method, max_iters=0, seed=3))
    assert trace.iterations == 0
    assert trace.final_solution == trace.initial_solution
    assert trace.final_objective == trace.initial_objective


def test_uqubols_seeded_run_is_monotone():
    problem = qap_problem(1, 8)
    cfg = RunConfig(
        max_iters=10, seed=5, annealer=FAST_ANNEALER, seed_annealer_with_current=True
    )
    trace = run_uqubols(problem, cfg)
    assert_monotone(trace)
    assert trace.method == Method.UQUBOLS
    assert all(record.feasible for record in trace.records)
    assert all(record.qubo_size == 4 for record in trace.records[1:])


@pytest.mark.parametrize("seed", range(5))
def test_uqubols_move_is_best_in_plan(seed):
    rng = np.random.default_rng(seed)
    problem = QapProblem(random_qap_instance(6, rng))
    start = Permutation.random(6, rng)
    cfg = RunConfig(max_iters=1).with_initial(start.image)
    trace = run_uqubols(problem, cfg, BruteForceSolver())

    plan = greedy_select_pairs(problem.instance, start, 3)
    best = min(
        qap_objective(problem.instance, plan.decode(y))
        for y in itertools.product((0, 1), repeat=plan.m)
    )
    assert trace.records[1].candidate_objective == best
    assert trace.final_objective == min(best, trace.initial_objective)


@pytest.mark.parametrize("seed", range(5))
def test_cqubols_pair_chooses_keep_or_swap(seed):
    rng = np.random.default_rng(10 + seed)
    problem = QapProblem(random_qap_instance(6, rng))
    start = Permutation.random(6, rng)
    cfg = RunConfig(method=Method.CQUBOLS, max_iters=1, k=2, m=1)
    trace = run_cqubols(problem, cfg.with_initial(start.image), BruteForceSolver())

    family = greedy_select_subsets(problem.instance, start, 2, 1)
    a, b = family.subsets[0]
    keep = problem.objective(start)
    swap = problem.objective(start.swapped(a, b))
    record = trace.records[1]
    assert record.feasible
    assert record.qubo_size == 4
    assert record.candidate_objective == min(keep, swap)
    assert trace.final_objective == min(keep, swap)


def test_cqubols_rejects_infeasible_output():
    problem = qap_problem(2, 6)
    cfg = RunConfig(method=Method.CQUBOLS, max_iters=3, seed=1)
    trace = run_cqubols(problem, cfg, ZeroSolver())
    assert trace.final_objective == trace.initial_objective
    assert trace.final_solution == trace.initial_solution
    assert not any(record.accepted for record in trace.records[1:])
    assert not any(record.feasible for record in trace.records[1:])
    assert trace.infeasible_rate() == 1.0


@pytest.mark.parametrize(
    "capacity, m, expected", [(1024, 2, 8), (1024, None, 16), (4, 3, 4)]
)
def test_cqubols_variable_count(capacity, m, expected):
    problem = qap_problem(3, 8)
    cfg = RunConfig(
        method=Method.CQUBOLS,
        max_iters=2,
        k=2,
        m=m,
        annealer=dataclasses.replace(FAST_ANNEALER, capacity=capacity),
    )
    trace = run_cqubols(problem, cfg)
    assert [record.qubo_size for record in trace.records[1:]] == [expected] * 2


def test_subset_count():
    assert subset_count(2, None, 10, 1024) == 5
    assert subset_count(2, 3, 10, 1024) == 3
    assert subset_count(32, 1, 50, 1024) == 1
    assert subset_count(3, None, 50, 20) == 2
    with pytest.raises(RunConfigError):
        subset_count(5, 1, 50, 20)
    with pytest.raises(RunConfigError):
        subset_count(4, 1, 3, 1024)


@pytest.mark.parametrize("seed", range(3))
def test_qls_whole_problem_reaches_optimum(seed):
    problem = qap_problem(20 + seed, 4)
    cfg = RunConfig(method=Method.QLS, max_iters=1, seed=seed)
    trace = run_qls(problem, cfg, BruteForceSolver())
    assert trace.records[1].qubo_size == 16
    assert trace.final_objective == optimum(problem)


def test_qls_matches_single_subset_cqubols():
    problem = qap_problem(4, 7)
    annealer = dataclasses.replace(FAST_ANNEALER, capacity=9)
    cfg = RunConfig(max_iters=4, seed=8, annealer=annealer)
    qls = run_qls(problem, cfg)
    cqubols = run_cqubols(problem, dataclasses.replace(cfg, k=3, m=1))
    assert qls.method == Method.QLS
    assert qls.records == cqubols.records
    assert qls.final_solution == cqubols.final_solution


def test_runs_are_seed_deterministic():
    problem = qap_problem(5, 8)
    cfg = RunConfig(max_iters=5, seed=11, annealer=FAST_ANNEALER)
    assert run_uqubols(problem, cfg) == run_uqubols(problem, cfg)
    sa = dataclasses.replace(cfg, method=Method.SA, max_iters=200)
    assert run_sa_baseline(problem, sa) == run_sa_baseline(problem, sa)


def test_methods_share_the_initial_solution():
    problem = qap_problem(6, 8)
    cfg = RunConfig(max_iters=2, seed=4, annealer=FAST_ANNEALER)
    traces = [run(problem, cfg.with_method(method)) for method in Method]
    assert len({trace.initial_solution for trace in traces}) == 1
    assert len({trace.initial_objective for trace in traces}) == 1


def crossed_cliques():
    """Two 4-cliques, each split across both parts of the start partition."""
    edges = [(u, v, 1) for u, v in itertools.combinations(range(4), 2)]
    edges += [(u + 4, v + 4, 1) for u, v in itertools.combinations(range(4), 2)]
    return WeightedGraph.from_edges(8, edges, name="cliques")


def seeded_problems():
    rng = np.random.default_rng(7)
    return [
        (QapProblem(random_qap_instance(8, rng)), Method.UQUBOLS),
        (QapProblem(random_qap_instance(8, rng)), Method.CQUBOLS),
        (QapProblem(random_qap_instance(8, rng)), Method.QLS),
        (M2spProblem(generate_graph("ladder", 5)), Method.UQUBOLS),
        (TspProblem(random_tsp_instance(12, rng)), Method.UQUBOLS),
        (PartitionProblem(crossed_cliques(), 2), Method.UQUBOLS),
    ]


@pytest.mark.parametrize("problem, method", seeded_problems())
def test_seeded_annealer_never_worse_than_incumbent(problem, method):
    annealer = dataclasses.replace(FAST_ANNEALER, capacity=16)
    cfg = RunConfig(
        method=method,
        max_iters=6,
        seed=2,
        annealer=annealer,
        seed_annealer_with_current=True,
    )
    trace = run(problem, cfg)
    assert_monotone(trace)
    for record in trace.records[1:]:
        assert record.candidate_energy <= record.incumbent_energy


def mixed_runs():
    """Seeded runs of every method over permutation, tour and partition problems."""
    for seed in range(50):
        if seed % 2:
            problem = M2spProblem(generate_graph("gnp", 7, 0.5, seed=seed))
        else:
            problem = qap_problem(100 + seed, 7)
        for method in Method:
            yield problem, method, seed
    for seed in range(25):
        rng = np.random.default_rng(500 + seed)
        for problem in (
            TspProblem(random_tsp_instance(9, rng)),
            PartitionProblem(generate_graph("gnp", 8, 0.5, seed=seed), 2),
        ):
            for method in (Method.UQUBOLS, Method.SA):
                yield problem, method, seed


def test_monotone_across_seeds_and_methods():
    runs = 0
    for problem, method, seed in mixed_runs():
        cfg = RunConfig(
            method=method,
            max_iters=4 if method != Method.SA else 300,
            seed=seed,
            annealer=dataclasses.replace(FAST_ANNEALER, mc_steps=500, capacity=16),
            selection=SelectionPolicy.RANDOM if seed % 3 else "greedy",
            seed_annealer_with_current=seed % 2 == 0,
        )
        trace = run(problem, cfg)
        assert_monotone(trace)
        if cfg.seed_annealer_with_current and method != Method.SA:
            for record in trace.records[1:]:
                assert record.candidate_energy <= record.incumbent_energy
        runs += 1
    assert runs >= 200


def test_tsp_uqubols_with_exact_solver():
    problem = TspProblem(random_tsp_instance(14, np.random.default_rng(9)))
    for selection in SelectionPolicy:
        cfg = RunConfig(max_iters=8, m=6, seed=3, selection=selection)
        trace = run_uqubols(problem, cfg, BruteForceSolver())
        assert_monotone(trace)
        assert all(record.qubo_size == 6 for record in trace.records[1:])
        tour = problem.solution_from_list(trace.final_solution)
        assert problem.objective(tour) == trace.final_objective


def test_partition_uqubols_improves_crossed_cliques():
    problem = PartitionProblem(crossed_cliques(), 2)
    start = (0, 0, 1, 1, 0, 0, 1, 1)
    cfg = RunConfig(max_iters=3).with_initial(start)
    trace = run_uqubols(problem, cfg, BruteForceSolver())
    assert trace.initial_objective == 8
    assert trace.records[1].accepted
    assert trace.final_objective < 8
    final = problem.solution_from_list(trace.final_solution)
    assert final.is_balanced()


@pytest.mark.parametrize("method", [Method.CQUBOLS, Method.QLS])
def test_subset_methods_unsupported_for_tours_and_partitions(method):
    tsp = TspProblem(random_tsp_instance(6, np.random.default_rng(0)))
    gp = PartitionProblem(crossed_cliques(), 2)
    for problem in (tsp, gp):
        with pytest.raises(UnsupportedMethodError):
            run(problem, RunConfig(method=method, max_iters=0))


def test_spectral_initialization():
    graph = generate_graph("path", 6)
    trace = run(M2spProblem(graph), RunConfig(max_iters=0, init=InitPolicy.SPECTRAL))
    assert trace.initial_objective == 5
    tsp = TspProblem(random_tsp_instance(6, np.random.default_rng(0)))
    with pytest.raises(UnsupportedMethodError):
        run(tsp, RunConfig(max_iters=0, init=InitPolicy.SPECTRAL))


def test_sa_zero_temperature_is_hill_climbing():
    problem = qap_problem(12, 8)
    cfg = RunConfig(
        method=Method.SA, max_iters=500, seed=1, sa_initial_temperature=0.0
    )
    trace = run_sa_baseline(problem, cfg)
    current = [record.candidate_objective for record in trace.records[1:]]
    assert all(b <= a for a, b in zip(current, current[1:]))
    assert current[-1] == trace.final_objective
    assert_monotone(trace)


def test_sa_final_solution_matches_objective():
    for problem in (
        qap_problem(13, 7),
        TspProblem(random_tsp_instance(9, np.random.default_rng(1))),
        PartitionProblem(crossed_cliques(), 2),
    ):
        trace = run_sa_baseline(problem, RunConfig(method=Method.SA, max_iters=300))
        final = problem.solution_from_list(trace.final_solution)
        assert problem.objective(final) == trace.final_objective
        assert trace.final_objective <= trace.initial_objective


def test_sa_finds_small_optima():
    hits = 0
    for seed in range(10):
        problem = qap_problem(200 + seed, 6)
        cfg = RunConfig(method=Method.SA, max_iters=3_000, seed=seed)
        hits += run_sa_baseline(problem, cfg).final_objective == optimum(problem)
    assert hits >= 7


@pytest.mark.slow
def test_sa_finds_small_optima_on_many_seeds():
    hits = 0
    for seed in range(100):
        problem = qap_problem(1_000 + seed, 6)
        cfg = RunConfig(method=Method.SA, max_iters=5_000, seed=seed)
        hits += run_sa_baseline(problem, cfg).final_objective == optimum(problem)
    assert hits >= 90


@pytest.mark.slow
def test_uqubols_beats_sa_on_random_qap():
    wins = 0
    for seed in range(10):
        problem = qap_problem(300 + seed, 50)
        base = RunConfig(seed=seed, annealer=AnnealerConfig(mc_steps=10_000))
        uqubols = run(problem, base).final_objective
        sa = run(problem, base.with_method(Method.SA)).final_objective
        wins += uqubols <= sa
    assert wins >= 6


@pytest.mark.slow
def test_uqubols_beats_sa_on_m2sp_graphs():
    wins = 0
    for seed in range(10):
        problem = M2spProblem(generate_graph("gnp", 120, 0.05, seed=seed))
        base = RunConfig(seed=seed, annealer=AnnealerConfig(mc_steps=10_000))
        uqubols = run(problem, base).final_objective
        sa_trace = run(problem, base.with_method(Method.SA))
        assert sa_trace.iterations == 15_000
        wins += uqubols <= sa_trace.final_objective
    assert wins >= 6


@pytest.mark.slow
def test_cqubols_needs_more_annealing_steps(record_property):
    finals = {}
    for method, mc_steps in itertools.product(
        (Method.CQUBOLS, Method.UQUBOLS), (1_000, 100_000)
    ):
        finals[method, mc_steps] = statistics.median(
            run(
                qap_problem(300 + seed, 50),
                RunConfig(
                    method=method,
                    seed=seed,
                    k=8,
                    m=1 if method == Method.CQUBOLS else None,
                    annealer=AnnealerConfig(mc_steps=mc_steps),
                ),
            ).final_objective
            for seed in range(10)
        )
    ratios = {
        method: finals[method, 1_000] / finals[method, 100_000]
        for method in (Method.CQUBOLS, Method.UQUBOLS)
    }
    record_property("cqubols_ratio", float(ratios[Method.CQUBOLS]))
    record_property("uqubols_ratio", float(ratios[Method.UQUBOLS]))
    assert finals[Method.CQUBOLS, 1_000] > finals[Method.CQUBOLS, 100_000]
    assert ratios[Method.UQUBOLS] < ratios[Method.CQUBOLS]


def test_initial_temperature_is_positive_for_nonflat_problems():
    problem = qap_problem(14, 6)
    rng = np.random.default_rng(0)
    start = problem.random_solution(rng)
    assert initial_temperature(problem, start, rng) > 0
    assert math.isclose(initial_temperature(problem, start, rng, samples=0), 0.0)
