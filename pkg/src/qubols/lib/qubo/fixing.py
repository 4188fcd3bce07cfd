from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from qubols.lib.qubo.exceptions import FormulationError, VariableIndexError
from qubols.lib.qubo.model import Edge, QuboModel


def free_variables(n: int, assignments: Mapping[int, int]) -> List[int]:
    """Original indices of the variables that remain after fixing, in order."""
    return [i for i in range(n) if i not in assignments]


def fix_variables(
    model: QuboModel, assignments: Mapping[int, int] | Sequence[Tuple[int, int]]
) -> QuboModel:
    """Substitute fixed bits and re-index the remaining variables.

    Remaining variables keep their relative order (see :func:`free_variables`).
    """
    pairs = assignments.items() if isinstance(assignments, Mapping) else assignments
    items = list(pairs)
    fixed: Dict[int, int] = {}
    for index, bit in items:
        if index in fixed:
            raise FormulationError(f"Variable {index} fixed twice")
        if not 0 <= index < model.n:
            raise VariableIndexError(index, model.n)
        if bit not in (0, 1):
            raise FormulationError(f"Variable {index} fixed to non-bit {bit}")
        fixed[index] = int(bit)

    remaining = free_variables(model.n, fixed)
    position = {old: new for new, old in enumerate(remaining)}
    linear = [model.linear[old] for old in remaining]
    offset = model.offset + sum(
        (model.linear[i] for i, bit in fixed.items() if bit), Fraction(0)
    )
    quadratic: Dict[Edge, Fraction] = {}
    for (i, j), q in model.quadratic.items():
        i_fixed, j_fixed = i in fixed, j in fixed
        if i_fixed and j_fixed:
            if fixed[i] and fixed[j]:
                offset += q
        elif i_fixed:
            if fixed[i]:
                linear[position[j]] += q
        elif j_fixed:
            if fixed[j]:
                linear[position[i]] += q
        else:
            quadratic[(position[i], position[j])] = q
    return QuboModel.from_terms(len(remaining), linear, quadratic, offset)
