from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from qubols.lib.constants import PenaltyMode
from qubols.lib.qubo.exceptions import FormulationError
from qubols.lib.qubo.model import Edge, QuboModel, flip_bound
from qubols.lib.utils import to_fraction


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty coefficients for exactly-one and cardinality constraints.

    In uniform mode every constraint uses ``value``; when ``value`` is unset the
    coefficient is ``scale * default_penalty(objective)``. In per-constraint mode
    ``values`` holds one coefficient per constraint, in constraint order.
    """

    mode: PenaltyMode = PenaltyMode.UNIFORM
    value: Optional[Fraction] = None
    values: Tuple[Fraction, ...] = field(default=())
    scale: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", PenaltyMode(self.mode))
        if self.value is not None:
            object.__setattr__(self, "value", to_fraction(self.value))
            if self.value <= 0:
                raise FormulationError("Penalty value must be positive")
        object.__setattr__(self, "values", tuple(to_fraction(v) for v in self.values))
        if any(v <= 0 for v in self.values):
            raise FormulationError("Penalty values must be positive")
        object.__setattr__(self, "scale", to_fraction(self.scale))
        if self.scale <= 0:
            raise FormulationError("Penalty scale must be positive")
        if self.mode == PenaltyMode.PER_CONSTRAINT and not self.values:
            raise FormulationError("Per-constraint mode needs penalty values")

    @classmethod
    def uniform(cls, value: Any = None, scale: Any = 1) -> PenaltyConfig:
        return cls(PenaltyMode.UNIFORM, value=value, scale=scale)

    @classmethod
    def per_constraint(cls, values: Sequence[Any]) -> PenaltyConfig:
        return cls(PenaltyMode.PER_CONSTRAINT, values=tuple(values))

    def coefficients(
        self, count: int, objective: Optional[QuboModel] = None
    ) -> List[Fraction]:
        """One coefficient per constraint."""
        if self.mode == PenaltyMode.PER_CONSTRAINT:
            if len(self.values) != count:
                raise FormulationError(
                    f"Got {len(self.values)} penalty values for {count} constraints"
                )
            return list(self.values)
        if self.value is not None:
            return [self.value] * count
        base = default_penalty(objective) if objective is not None else Fraction(1)
        return [self.scale * base] * count


def default_penalty(objective_part: QuboModel) -> Fraction:
    """``1 + max_i(|linear_i| + sum_j |q_ij|)``."""
    return 1 + flip_bound(objective_part)


def add_cardinality_penalties(
    model: QuboModel,
    groups: Sequence[Sequence[int]],
    targets: Sequence[Any],
    penalties: PenaltyConfig,
    objective: Optional[QuboModel] = None,
) -> QuboModel:
    """Add ``lambda_g * (sum_{i in g} x_i - t_g)**2`` for every group.

    ``objective`` is the model whose flip bound sizes the default penalty; it
    defaults to ``model`` itself.
    """
    if len(groups) != len(targets):
        raise FormulationError("Every group needs a target count")
    lambdas = penalties.coefficients(len(groups), objective or model)
    linear = list(model.linear)
    quadratic: Dict[Edge, Fraction] = dict(model.quadratic)
    offset = model.offset
    for group, target, lam in zip(groups, targets, lambdas):
        members = list(group)
        if not members:
            raise FormulationError("Empty constraint group cannot be satisfied")
        if len(set(members)) != len(members):
            raise FormulationError(f"Repeated variable in group {members}")
        t = to_fraction(target)
        for a, i in enumerate(members):
            if not 0 <= i < model.n:
                raise FormulationError(f"Group index {i} outside 0..{model.n - 1}")
            linear[i] += lam * (1 - 2 * t)
            for j in members[a + 1 :]:
                key = (i, j) if i < j else (j, i)
                quadratic[key] = quadratic.get(key, Fraction(0)) + 2 * lam
        offset += lam * t * t
    return QuboModel.from_terms(model.n, linear, quadratic, offset)


def add_one_hot_penalties(
    model: QuboModel,
    groups: Sequence[Sequence[int]],
    penalties: PenaltyConfig,
    objective: Optional[QuboModel] = None,
) -> QuboModel:
    return add_cardinality_penalties(
        model, groups, [1] * len(groups), penalties, objective
    )


def two_way_one_hot_groups(rows: int, cols: int) -> List[List[int]]:
    """Row groups followed by column groups of a row-major ``rows x cols`` grid."""
    row_groups = [[r * cols + c for c in range(cols)] for r in range(rows)]
    col_groups = [[r * cols + c for r in range(rows)] for c in range(cols)]
    return row_groups + col_groups
