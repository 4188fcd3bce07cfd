import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from qubols.lib.constants import Rounding
from qubols.lib.problems import (
    InvalidMoveError,
    ParseError,
    Tour,
    TspInstance,
    apply_reversals,
    build_k_reversal_qubo,
    decompose,
    parse_coordinates,
    parse_distance_matrix,
    random_tsp_instance,
    tour_length,
)
from qubols.lib.problems.tsp import (
    random_cut_positions,
    reachable_tours,
    two_opt_delta,
    two_opt_move,
)
from qubols.lib.qubo import evaluate


def connecting_weight(inst, decomp, tour):
    """Weight of the tour edges that join consecutive segments."""
    return tour_length(inst, tour) - build_k_reversal_qubo(inst, decomp).internal_weight


def test_two_cities():
    inst = TspInstance([[0, 4], [4, 0]])
    assert tour_length(inst, Tour((1, 0))) == 8


def test_equal_distances():
    inst = TspInstance(3 * (np.ones((6, 6), dtype=int) - np.eye(6, dtype=int)))
    rng = np.random.default_rng(0)
    for _ in range(5):
        assert tour_length(inst, Tour.random(6, rng)) == 18


def test_enumerated_distinct_tours():
    inst = random_tsp_instance(7, np.random.default_rng(1))
    lengths = {}
    for order in itertools.permutations(range(7)):
        tour = Tour(order)
        lengths[tour.canonical()] = tour_length(inst, tour)
    assert len(lengths) == math.factorial(6) // 2
    brute = min(
        sum(Fraction(int(inst.dist[o[t], o[(t + 1) % 7]])) for t in range(7))
        for o in itertools.permutations(range(7))
    )
    assert min(lengths.values()) == brute


def test_decompose_two_segments():
    decomp = decompose(Tour((3, 1, 0, 2)), [2, 0])
    assert decomp.segments == ((1, 0), (2, 3))
    assert decomp.heads == (1, 2)
    assert decomp.tails == (0, 3)


def test_decompose_into_singletons():
    tour = Tour((2, 0, 4, 1, 3))
    decomp = decompose(tour, range(5))
    assert all(len(segment) == 1 for segment in decomp.segments)
    assert decomp.heads == decomp.tails


@pytest.mark.parametrize("cuts", [[1], [], [0, 0, 2], [0, 5]])
def test_decompose_errors(cuts):
    with pytest.raises(InvalidMoveError):
        decompose(Tour.identity(5), cuts)


def test_zero_reversals_reproduce_the_tour():
    rng = np.random.default_rng(2)
    tour = Tour.random(9, rng)
    decomp = decompose(tour, random_cut_positions(9, 4, rng))
    assert apply_reversals(decomp, (0, 0, 0, 0)).canonical() == tour.canonical()


def test_two_reversal_is_two_opt():
    rng = np.random.default_rng(3)
    inst = random_tsp_instance(8, rng)
    tour = Tour.random(8, rng)
    decomp = decompose(tour, [1, 5])
    (u1, u2), (v1, v2) = decomp.heads, decomp.tails
    model = build_k_reversal_qubo(inst, decomp).model
    assert evaluate(model, (0, 0)) == inst[v1, u2] + inst[v2, u1]
    assert evaluate(model, (1, 0)) == inst[u1, u2] + inst[v1, v2]
    assert evaluate(model, (1, 1)) == evaluate(model, (0, 0))


def test_all_zeros_is_connecting_weight():
    rng = np.random.default_rng(4)
    inst = random_tsp_instance(10, rng)
    tour = Tour.random(10, rng)
    decomp = decompose(tour, [0, 3, 4, 8])
    model = build_k_reversal_qubo(inst, decomp).model
    assert evaluate(model, (0,) * 4) == connecting_weight(inst, decomp, tour)


def test_four_reversals_exhaustive():
    rng = np.random.default_rng(5)
    inst = random_tsp_instance(10, rng)
    decomp = decompose(Tour.random(10, rng), random_cut_positions(10, 4, rng))
    model, internal = build_k_reversal_qubo(inst, decomp)
    for y in itertools.product((0, 1), repeat=4):
        assert evaluate(model, y) + internal == tour_length(
            inst, apply_reversals(decomp, y)
        )


def test_reversal_identity_on_random_instances():
    rng = np.random.default_rng(6)
    for _ in range(50):
        n = int(rng.integers(2, 15))
        k = int(rng.integers(2, min(6, n) + 1))
        inst = random_tsp_instance(n, rng)
        decomp = decompose(Tour.random(n, rng), random_cut_positions(n, k, rng))
        model, internal = build_k_reversal_qubo(inst, decomp)
        for y in itertools.product((0, 1), repeat=k):
            tour = apply_reversals(decomp, y)
            assert sorted(tour.order) == list(range(n))
            assert evaluate(model, y) + internal == tour_length(inst, tour)


def test_single_city_segment_reversal_is_noop():
    decomp = decompose(Tour.identity(5), [0, 1, 3])
    assert decomp.segments[0] == (1,)
    assert apply_reversals(decomp, (1, 0, 0)) == apply_reversals(decomp, (0, 0, 0))


def test_three_reversal_neighborhood_size():
    k = 3
    decomp = decompose(Tour.identity(12), [1, 5, 9])
    reachable = reachable_tours(decomp)
    assert len(reachable) <= 2**k <= math.factorial(k - 1) * 2 ** (k - 1)


def test_two_opt_delta_matches_recompute():
    rng = np.random.default_rng(7)
    inst = random_tsp_instance(9, rng)
    tour = Tour.random(9, rng)
    for i, j in itertools.combinations(range(9), 2):
        moved = two_opt_move(tour, i, j)
        expected = tour_length(inst, moved) - tour_length(inst, tour)
        assert two_opt_delta(inst, tour, i, j) == expected


def test_parse_distance_matrix():
    inst = parse_distance_matrix("3\n0 1 2\n1 0 3\n2 3 0\n")
    assert inst.n == 3
    assert inst[1, 2] == 3


@pytest.mark.parametrize(
    "text", ["2 0 1 2 0", "2 0 1 1", "2 1 1 1 0", "x", ""]
)
def test_parse_distance_matrix_errors(text):
    with pytest.raises(ParseError):
        parse_distance_matrix(text)


def test_parse_coordinates_rounding():
    text = "0 0\n3 4\n# comment\n\n1 1\n"
    exact = parse_coordinates(text)
    assert exact[0, 1] == 5
    assert float(exact[0, 2]) == pytest.approx(math.sqrt(2))
    rounded = parse_coordinates(text, Rounding.NEAREST)
    assert rounded[0, 2] == 1
    assert rounded[1, 2] == 4


def test_parse_coordinates_error():
    with pytest.raises(ParseError):
        parse_coordinates("1 2 3\n")
