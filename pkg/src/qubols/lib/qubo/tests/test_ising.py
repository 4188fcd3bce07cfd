import itertools
from fractions import Fraction

import numpy as np
import pytest

from qubols.lib.qubo import (
    IsingModel,
    QuboModel,
    bits_to_spins,
    evaluate,
    evaluate_ising,
    ising_to_qubo,
    qubo_to_ising,
)


def random_ising(rng, n):
    h = [int(v) for v in rng.integers(-5, 6, size=n)]
    couplings = {
        (i, j): int(rng.integers(-5, 6)) for i in range(n) for j in range(i + 1, n)
    }
    return IsingModel.from_terms(n, h, couplings, int(rng.integers(-3, 4)))


def test_all_minus_one_maps_to_all_zero():
    model = IsingModel.from_terms(3, [1, -2, 3], {(0, 1): 2, (1, 2): -1}, 4)
    qubo = ising_to_qubo(model)
    assert evaluate(qubo, (0, 0, 0)) == evaluate_ising(model, (-1, -1, -1))


def test_single_spin_conversion():
    qubo = ising_to_qubo(IsingModel.from_terms(1, [1]))
    assert qubo.linear == (2,)
    assert qubo.offset == -1


def test_ising_to_qubo_pointwise_equality():
    rng = np.random.default_rng(10)
    model = random_ising(rng, 8)
    qubo = ising_to_qubo(model)
    for x in itertools.product((0, 1), repeat=8):
        assert evaluate(qubo, x) == evaluate_ising(model, bits_to_spins(x))


@pytest.mark.parametrize("n", [1, 5, 12])
def test_round_trip_preserves_energy(n):
    rng = np.random.default_rng(n)
    quadratic = {
        (i, j): Fraction(int(rng.integers(-9, 10)), 3)
        for i in range(n)
        for j in range(i + 1, n)
    }
    qubo = QuboModel.from_terms(
        n, [int(v) for v in rng.integers(-9, 10, size=n)], quadratic, 2
    )
    ising = qubo_to_ising(qubo)
    back = ising_to_qubo(ising)
    for x in itertools.product((0, 1), repeat=n):
        energy = evaluate(qubo, x)
        assert evaluate_ising(ising, bits_to_spins(x)) == energy
        assert evaluate(back, x) == energy


def test_invalid_spins_rejected():
    model = IsingModel.from_terms(2)
    with pytest.raises(ValueError):
        evaluate_ising(model, (0, 1))
