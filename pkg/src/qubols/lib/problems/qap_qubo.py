"""QUBO formulations over QAP instances.

``full_qubo`` places facility ``i`` at location ``k`` through variable
``i * n + k``. The local search sub-QUBOs either keep that encoding inside
each subset (``build_cqubols_qubo``) or use one variable per exchanged pair
(``build_uqubols_qubo``), in which case every assignment is a permutation.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from qubols.lib.problems.permutation import Permutation
from qubols.lib.problems.qap import (
    ExchangePlan,
    QapInstance,
    SubsetFamily,
    qap_objective,
)
from qubols.lib.qubo import (
    BitString,
    DimensionError,
    PenaltyConfig,
    QuboModel,
    add_one_hot_penalties,
    two_way_one_hot_groups,
)


def _check_size(inst: QapInstance, perm: Permutation) -> None:
    if len(perm) != inst.n:
        raise DimensionError(inst.n, len(perm), "permutation")


def _one_hot_rows(bits: Sequence[int], k: int) -> Optional[List[int]]:
    """Column of the single 1 in each row of a ``k x k`` block, if feasible."""
    matrix = np.asarray(bits, dtype=np.int64).reshape(k, k)
    if np.all(matrix.sum(axis=0) == 1) and np.all(matrix.sum(axis=1) == 1):
        return [int(col) for col in np.argmax(matrix, axis=1)]
    return None


def full_qubo(inst: QapInstance, penalties: PenaltyConfig) -> QuboModel:
    """Assignment-matrix QUBO with two-way one-hot penalties."""
    objective = QuboModel.from_matrix(np.kron(inst.flow, inst.dist))
    groups = two_way_one_hot_groups(inst.n, inst.n)
    return add_one_hot_penalties(objective, groups, penalties, objective)


def permutation_bits(perm: Permutation) -> BitString:
    n = len(perm)
    bits = [0] * (n * n)
    for i, k in enumerate(perm):
        bits[i * n + k] = 1
    return tuple(bits)


def decode_full(bits: Sequence[int], n: int) -> Optional[Permutation]:
    """Permutation encoded by an ``n x n`` assignment matrix, or ``None``."""
    if len(bits) != n * n:
        raise DimensionError(n * n, len(bits))
    columns = _one_hot_rows(bits, n)
    return None if columns is None else Permutation(tuple(columns))


def build_uqubols_qubo(inst: QapInstance, plan: ExchangePlan) -> QuboModel:
    """One variable per exchanged pair; energies equal objectives exactly.

    ``evaluate(model, y) == qap_objective(inst, plan.decode(y))`` for every
    ``y``, constant terms included.
    """
    _check_size(inst, plan.base)
    m = plan.m
    if m == 0:
        return QuboModel.from_terms(0, offset=qap_objective(inst, plan.base))

    w, d = inst.flow, inst.dist
    p = plan.base.as_array()
    first = np.array([pair[0] for pair in plan.pairs], dtype=np.intp)
    second = np.array([pair[1] for pair in plan.pairs], dtype=np.intp)
    untouched = np.setdiff1d(np.arange(inst.n), np.concatenate([first, second]))
    fixed_locations = p[untouched]
    # locations of (first, second) facility of every pair for y = 0 and y = 1
    placed = {0: (p[first], p[second]), 1: (p[second], p[first])}

    def pair_to_pair(s: int, t: int) -> np.ndarray:
        """Entry ``[P, Q]``: flow cost from pair P in state s to pair Q in state t."""
        total = np.zeros((m, m), dtype=object)
        for src, src_loc in zip((first, second), placed[s]):
            for dst, dst_loc in zip((first, second), placed[t]):
                total = total + w[np.ix_(src, dst)] * d[np.ix_(src_loc, dst_loc)]
        return total

    def pair_to_fixed(s: int) -> np.ndarray:
        """Entry ``[P]``: cost between pair P in state s and untouched facilities."""
        total = np.zeros(m, dtype=object)
        for src, src_loc in zip((first, second), placed[s]):
            out_flow = w[np.ix_(src, untouched)] * d[np.ix_(src_loc, fixed_locations)]
            in_flow = w[np.ix_(untouched, src)] * d[np.ix_(fixed_locations, src_loc)]
            total = total + out_flow.sum(axis=1) + in_flow.sum(axis=0)
        return total

    flows = {(s, t): pair_to_pair(s, t) for s in (0, 1) for t in (0, 1)}
    # both directions between pairs P and Q for states (y_P, y_Q)
    inter = {(s, t): flows[s, t] + flows[t, s].T for s in (0, 1) for t in (0, 1)}
    intra = {s: np.diag(flows[s, s]) for s in (0, 1)}
    outer = {s: pair_to_fixed(s) for s in (0, 1)}

    others = ~np.eye(m, dtype=bool)
    upper = np.triu(np.ones((m, m), dtype=bool), 1)
    linear = (
        intra[1]
        - intra[0]
        + outer[1]
        - outer[0]
        + np.where(others, inter[1, 0] - inter[0, 0], 0).sum(axis=1)
    )
    coupling = inter[1, 1] - inter[1, 0] - inter[0, 1] + inter[0, 0]
    quadratic = {(int(i), int(j)): coupling[i, j] for i, j in zip(*np.nonzero(upper))}
    fixed_cost = (
        w[np.ix_(untouched, untouched)] * d[np.ix_(fixed_locations, fixed_locations)]
    ).sum()
    offset = (
        fixed_cost
        + intra[0].sum()
        + outer[0].sum()
        + np.where(upper, inter[0, 0], 0).sum()
    )
    return QuboModel.from_terms(m, list(linear), quadratic, offset)


def decode_uqubols(plan: ExchangePlan, y: Sequence[int]) -> Permutation:
    return plan.decode(y)


def _block_layout(
    family: SubsetFamily, perm: Permutation
) -> Tuple[np.ndarray, np.ndarray]:
    """Facility and location of every sub-QUBO variable.

    Block ``j`` holds ``k * k`` variables; variable ``t * k + u`` of the block
    puts facility ``F_j[t]`` at the current location of ``F_j[u]``.
    """
    facilities: List[int] = []
    locations: List[int] = []
    for subset in family.subsets:
        for f in subset:
            for g in subset:
                facilities.append(f)
                locations.append(perm[g])
    return np.array(facilities, dtype=np.intp), np.array(locations, dtype=np.intp)


def build_cqubols_qubo(
    inst: QapInstance,
    family: SubsetFamily,
    perm: Permutation,
    penalties: PenaltyConfig,
) -> QuboModel:
    """Full QUBO restricted to moves inside each subset's current locations.

    Facilities outside the family stay where they are; their interactions
    become linear terms and the offset. Penalties are two-way one-hot per
    block, sized from the objective part unless given explicitly.
    """
    _check_size(inst, perm)
    for f in family.facilities:
        if not 0 <= f < inst.n:
            raise IndexError(f"Facility {f} out of range for n={inst.n}")
    w, d = inst.flow, inst.dist
    facilities, locations = _block_layout(family, perm)
    moving = np.asarray(family.facilities, dtype=np.intp)
    fixed = np.setdiff1d(np.arange(inst.n), moving)
    fixed_locations = perm.as_array()[fixed]

    matrix = np.asarray(
        w[np.ix_(facilities, facilities)] * d[np.ix_(locations, locations)],
        dtype=object,
    )
    out_flow = w[np.ix_(facilities, fixed)] * d[np.ix_(locations, fixed_locations)]
    in_flow = w[np.ix_(fixed, facilities)] * d[np.ix_(fixed_locations, locations)]
    linear = np.asarray(out_flow.sum(axis=1) + in_flow.sum(axis=0), dtype=object)
    offset = (
        w[np.ix_(fixed, fixed)] * d[np.ix_(fixed_locations, fixed_locations)]
    ).sum()
    objective = QuboModel.from_matrix(matrix + np.diag(linear), offset)

    k = family.k
    groups: List[List[int]] = []
    for j in range(family.m):
        start = j * k * k
        groups.extend(
            [start + v for v in group] for group in two_way_one_hot_groups(k, k)
        )
    return add_one_hot_penalties(objective, groups, penalties, objective)


def cqubols_current_bits(family: SubsetFamily) -> BitString:
    """Encoding of the unchanged permutation (identity inside every block)."""
    k = family.k
    block = [1 if t == u else 0 for t in range(k) for u in range(k)]
    return tuple(block * family.m)


def decode_cqubols(
    family: SubsetFamily, perm: Permutation, bits: Sequence[int]
) -> Optional[Permutation]:
    """Apply every block assignment to ``perm``; ``None`` if a block is infeasible."""
    k = family.k
    if len(bits) != family.m * k * k:
        raise DimensionError(family.m * k * k, len(bits))
    image = list(perm.image)
    for j, subset in enumerate(family.subsets):
        columns = _one_hot_rows(bits[j * k * k : (j + 1) * k * k], k)
        if columns is None:
            return None
        for t, f in enumerate(subset):
            image[f] = perm[subset[columns[t]]]
    return Permutation(tuple(image))
