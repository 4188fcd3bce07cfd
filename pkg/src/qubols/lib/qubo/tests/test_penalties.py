import itertools
from fractions import Fraction

import numpy as np
import pytest

from qubols.lib.constants import PenaltyMode
from qubols.lib.qubo import (
    FormulationError,
    PenaltyConfig,
    QuboModel,
    add_cardinality_penalties,
    add_one_hot_penalties,
    default_penalty,
    delta_flip,
    evaluate,
    two_way_one_hot_groups,
)


def is_permutation_matrix(x, n):
    rows = [sum(x[r * n + c] for c in range(n)) for r in range(n)]
    cols = [sum(x[r * n + c] for r in range(n)) for c in range(n)]
    return all(v == 1 for v in rows + cols)


def test_one_hot_pair():
    model = add_one_hot_penalties(
        QuboModel.zero(2), [[0, 1]], PenaltyConfig.uniform(10)
    )
    assert evaluate(model, (1, 0)) == 0
    assert evaluate(model, (1, 1)) == 10
    assert evaluate(model, (0, 0)) == 10


def test_penalty_grows_quadratically():
    model = add_one_hot_penalties(
        QuboModel.zero(3), [[0, 1, 2]], PenaltyConfig.uniform(2)
    )
    assert evaluate(model, (1, 1, 1)) == 2 * (3 - 1) ** 2


def test_two_way_one_hot_grid():
    model = add_one_hot_penalties(
        QuboModel.zero(9), two_way_one_hot_groups(3, 3), PenaltyConfig.uniform(1)
    )
    zero_count = 0
    for x in itertools.product((0, 1), repeat=9):
        energy = evaluate(model, x)
        if is_permutation_matrix(x, 3):
            assert energy == 0
            zero_count += 1
        else:
            assert energy > 0
    assert zero_count == 6


def test_empty_group_is_formulation_error():
    with pytest.raises(FormulationError):
        add_one_hot_penalties(QuboModel.zero(2), [[]], PenaltyConfig.uniform(1))


def test_default_penalty_values():
    assert default_penalty(QuboModel.zero(3)) == 1
    assert default_penalty(QuboModel.from_terms(1, [-4])) == 5


def test_default_penalty_exceeds_every_flip():
    rng = np.random.default_rng(7)
    n = 8
    model = QuboModel.from_terms(
        n,
        [int(v) for v in rng.integers(-6, 7, size=n)],
        {(i, j): int(rng.integers(-6, 7)) for i in range(n) for j in range(i + 1, n)},
    )
    bound = default_penalty(model)
    for x in itertools.product((0, 1), repeat=n):
        for i in range(n):
            assert abs(delta_flip(model, x, i)) < bound


def test_default_penalty_minimizers_are_permutations():
    # non-negative coefficients, as in assignment objectives
    rng = np.random.default_rng(8)
    n = 3
    for _ in range(5):
        objective = QuboModel.from_terms(
            n * n,
            [int(v) for v in rng.integers(0, 5, size=n * n)],
            {
                (i, j): int(rng.integers(0, 5))
                for i in range(n * n)
                for j in range(i + 1, n * n)
                if rng.random() < 0.5
            },
        )
        model = add_one_hot_penalties(
            objective, two_way_one_hot_groups(n, n), PenaltyConfig.uniform()
        )
        energies = {
            x: evaluate(model, x) for x in itertools.product((0, 1), repeat=n * n)
        }
        best = min(energies.values())
        for x, energy in energies.items():
            if energy == best:
                assert is_permutation_matrix(x, n)


def test_uniform_default_uses_objective_bound():
    objective = QuboModel.from_terms(2, [3, 0], {(0, 1): -2})
    model = add_one_hot_penalties(objective, [[0, 1]], PenaltyConfig.uniform())
    # lambda = 1 + 3 + 2
    assert evaluate(model, (0, 0)) - evaluate(objective, (0, 0)) == 6


def test_scale_multiplies_default():
    objective = QuboModel.from_terms(1, [1])
    model = add_one_hot_penalties(
        objective, [[0]], PenaltyConfig.uniform(scale=Fraction(1, 2))
    )
    assert evaluate(model, (0,)) == 1


def test_per_constraint_penalties():
    penalties = PenaltyConfig.per_constraint([2, 5])
    model = add_one_hot_penalties(QuboModel.zero(4), [[0, 1], [2, 3]], penalties)
    assert evaluate(model, (0, 0, 1, 0)) == 2
    assert evaluate(model, (1, 0, 1, 1)) == 5
    assert penalties.mode == PenaltyMode.PER_CONSTRAINT


def test_per_constraint_count_mismatch():
    with pytest.raises(FormulationError):
        add_one_hot_penalties(
            QuboModel.zero(2), [[0], [1]], PenaltyConfig.per_constraint([1])
        )


def test_non_positive_penalty_rejected():
    with pytest.raises(FormulationError):
        PenaltyConfig.uniform(0)


def test_cardinality_target():
    model = add_cardinality_penalties(
        QuboModel.zero(4), [[0, 1, 2, 3]], [2], PenaltyConfig.uniform(3)
    )
    for x in itertools.product((0, 1), repeat=4):
        assert evaluate(model, x) == 3 * (sum(x) - 2) ** 2
