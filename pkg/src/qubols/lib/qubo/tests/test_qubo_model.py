import itertools
from fractions import Fraction

import numpy as np
import pytest

from qubols.lib.qubo import (
    DimensionError,
    FormulationError,
    QuboModel,
    VariableIndexError,
    bits_from_int,
    delta_flip,
    evaluate,
    flip_bound,
    quantize,
)


def random_model(rng, n, low=-10, high=10, density=0.7):
    quadratic = {
        (i, j): int(rng.integers(low, high + 1))
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    }
    linear = [int(v) for v in rng.integers(low, high + 1, size=n)]
    return QuboModel.from_terms(n, linear, quadratic, int(rng.integers(-5, 6)))


def naive_energy(model, x):
    n = model.n
    matrix = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        matrix[i][i] = model.linear[i]
    for (i, j), q in model.quadratic.items():
        matrix[i][j] = q
    total = model.offset
    for i in range(n):
        for j in range(n):
            total += matrix[i][j] * x[i] * x[j]
    return total


def test_all_zeros_gives_offset():
    model = QuboModel.from_terms(3, [1, 2, 3], {(0, 1): 4}, offset=7)
    assert evaluate(model, (0, 0, 0)) == 7


def test_direct_substitution():
    model = QuboModel.from_terms(2, [1, -2], {(0, 1): 3})
    assert evaluate(model, (1, 1)) == 2


def test_matches_naive_oracle():
    rng = np.random.default_rng(1)
    for _ in range(20):
        model = random_model(rng, 10)
        x = tuple(int(b) for b in rng.integers(0, 2, size=10))
        assert evaluate(model, x) == naive_energy(model, x)


def test_length_mismatch():
    model = QuboModel.zero(3)
    with pytest.raises(DimensionError):
        evaluate(model, (0, 1))


def test_diagonal_folded_and_keys_canonical():
    model = QuboModel.from_terms(3, None, {(1, 1): 5, (2, 0): 3, (0, 2): 1})
    assert model.linear == (0, 5, 0)
    assert dict(model.quadratic) == {(0, 2): 4}


def test_zero_couplings_dropped():
    model = QuboModel.from_terms(2, None, {(0, 1): 3, (1, 0): -3})
    assert dict(model.quadratic) == {}


def test_fractional_coefficients_exact():
    model = QuboModel.from_terms(2, [0.5, Fraction(1, 3)], {(0, 1): "0.25"})
    assert evaluate(model, (1, 1)) == Fraction(1, 2) + Fraction(1, 3) + Fraction(1, 4)


def test_delta_flip_isolated_variable():
    model = QuboModel.from_terms(3, [0, 5, 0], {(0, 2): 1})
    assert delta_flip(model, (1, 0, 1), 1) == 5


def test_delta_flip_involution():
    rng = np.random.default_rng(2)
    model = random_model(rng, 8)
    x = (1, 0, 1, 1, 0, 0, 1, 0)
    for i in range(8):
        flipped = list(x)
        flipped[i] ^= 1
        assert delta_flip(model, x, i) + delta_flip(model, flipped, i) == 0


def test_delta_flip_matches_reevaluation():
    rng = np.random.default_rng(3)
    for _ in range(10_000 // 50):
        model = random_model(rng, int(rng.integers(1, 12)))
        for _ in range(50):
            x = [int(b) for b in rng.integers(0, 2, size=model.n)]
            i = int(rng.integers(0, model.n))
            before = evaluate(model, x)
            delta = delta_flip(model, x, i)
            x[i] ^= 1
            assert evaluate(model, x) - before == delta


def test_delta_flip_out_of_range():
    model = QuboModel.zero(2)
    with pytest.raises(VariableIndexError):
        delta_flip(model, (0, 0), 2)


def test_delta_chain_from_zero_equals_direct_evaluation():
    rng = np.random.default_rng(4)
    model = random_model(rng, 9)
    for value in range(2**9):
        target = bits_from_int(value, 9)
        x = [0] * 9
        energy = model.offset
        for i, bit in enumerate(target):
            if bit:
                energy += delta_flip(model, x, i)
                x[i] = 1
        assert energy == evaluate(model, target)


def test_flip_bound_covers_every_flip():
    rng = np.random.default_rng(5)
    model = random_model(rng, 6)
    bound = flip_bound(model)
    for x in itertools.product((0, 1), repeat=6):
        for i in range(6):
            assert abs(delta_flip(model, x, i)) <= bound


def test_invalid_quadratic_key_rejected():
    with pytest.raises(VariableIndexError):
        QuboModel.from_terms(2, None, {(0, 2): 1})


def test_model_is_immutable():
    model = QuboModel.zero(2)
    with pytest.raises(AttributeError):
        model.offset = Fraction(3)  # type: ignore[misc]
    with pytest.raises(TypeError):
        model.quadratic[(0, 1)] = Fraction(1)  # type: ignore[index]


def test_quantize_rounds_to_grid():
    model = QuboModel.from_terms(2, [Fraction(1, 3), -1], {(0, 1): Fraction(1, 2)})
    quantized = quantize(model, 3)
    # largest |coefficient| 1 maps to 3
    assert quantized.linear == (1, -3)
    assert dict(quantized.quadratic) == {(0, 1): 2}


def test_quantize_needs_two_bits():
    with pytest.raises(FormulationError):
        quantize(QuboModel.zero(1), 1)
