import itertools
from fractions import Fraction

import numpy as np
import pytest

from qubols.lib.annealer import (
    AnnealerConfig,
    BruteForceSolver,
    CapacityExceededError,
    brute_force_solve,
)
from qubols.lib.qubo import QuboModel, evaluate


def test_zero_model():
    result = brute_force_solve(QuboModel.from_terms(4, offset=3))
    assert result.best == (0, 0, 0, 0)
    assert result.best_energy == 3


def test_ties_pick_lexicographically_smallest():
    model = QuboModel.from_terms(
        3, [-1, -1, -1], {(0, 1): 5, (0, 2): 5, (1, 2): 5}, offset=2
    )
    result = brute_force_solve(model)
    assert result.best == (0, 0, 1)
    assert result.best_energy == 1


def test_matches_exhaustive_minimum():
    rng = np.random.default_rng(0)
    for n in range(1, 9):
        model = QuboModel.from_terms(
            n,
            [Fraction(int(v), 3) for v in rng.integers(-9, 10, size=n)],
            {
                (i, j): int(rng.integers(-9, 10))
                for i in range(n)
                for j in range(i + 1, n)
            },
        )
        energies = {
            x: evaluate(model, x) for x in itertools.product((0, 1), repeat=n)
        }
        best = min(energies.values())
        expected = min(x for x, energy in energies.items() if energy == best)
        result = brute_force_solve(model)
        assert result.best == expected
        assert result.best_energy == best


def test_refuses_large_models():
    with pytest.raises(CapacityExceededError):
        brute_force_solve(QuboModel.zero(25))


def test_solver_honors_capacity():
    with pytest.raises(CapacityExceededError):
        BruteForceSolver().solve(QuboModel.zero(5), AnnealerConfig(capacity=4))
