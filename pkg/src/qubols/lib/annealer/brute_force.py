from __future__ import annotations

import math
from typing import List

from qubols.lib.annealer.config import AnnealResult
from qubols.lib.annealer.exceptions import CapacityExceededError
from qubols.lib.constants import BRUTE_FORCE_MAX_VARIABLES
from qubols.lib.qubo import QuboModel, evaluate


def _integer_terms(model: QuboModel) -> tuple[List[int], List[List[tuple[int, int]]]]:
    """Scale all coefficients to integers over a common denominator."""
    denominators = [v.denominator for v in model.linear]
    denominators += [v.denominator for v in model.quadratic.values()]
    scale = math.lcm(*denominators) if denominators else 1
    linear = [int(v * scale) for v in model.linear]
    neighbors = [
        [(j, int(q * scale)) for j, q in row] for row in model.neighbors
    ]
    return linear, neighbors


def brute_force_solve(model: QuboModel) -> AnnealResult:
    """Exact minimum by Gray-code enumeration of all ``2**n`` assignments.

    Ties go to the lexicographically smallest bit string.
    """
    n = model.n
    if n > BRUTE_FORCE_MAX_VARIABLES:
        raise CapacityExceededError(n, BRUTE_FORCE_MAX_VARIABLES)
    linear, neighbors = _integer_terms(model)

    x = [0] * n
    energy = 0
    best = list(x)
    best_energy = 0
    for g in range(1, 2**n):
        # Gray code: consecutive codes differ in the lowest set bit of g
        i = n - (g & -g).bit_length()
        local = linear[i] + sum(q for j, q in neighbors[i] if x[j])
        energy += -local if x[i] else local
        x[i] ^= 1
        if energy < best_energy or (energy == best_energy and x < best):
            best = list(x)
            best_energy = energy

    bits = tuple(best)
    exact = evaluate(model, bits)
    return AnnealResult(bits, exact, ((0, exact),), 2**n)
