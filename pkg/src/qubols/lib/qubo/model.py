from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from qubols.lib.qubo.exceptions import (
    DimensionError,
    FormulationError,
    VariableIndexError,
)
from qubols.lib.utils import to_fraction

BitString = Tuple[int, ...]
Edge = Tuple[int, int]


def as_bits(x: Iterable[Any]) -> BitString:
    bits = tuple(int(b) for b in x)
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"Not a bit: {b}")
    return bits


def bits_from_int(value: int, n: int) -> BitString:
    """Bits of ``value`` with index 0 as the most significant bit."""
    return tuple((value >> (n - 1 - i)) & 1 for i in range(n))


@dataclass(frozen=True)
class QuboModel:
    """Energy ``offset + sum(linear[i] x_i) + sum(quadratic[i, j] x_i x_j)``.

    Build instances with :meth:`from_terms`, which folds diagonal entries into
    the linear part, sums duplicate keys and drops zero couplings.
    """

    n: int
    linear: Tuple[Fraction, ...]
    quadratic: Mapping[Edge, Fraction]
    offset: Fraction = field(default=Fraction(0))

    def __post_init__(self) -> None:
        if len(self.linear) != self.n:
            raise DimensionError(self.n, len(self.linear), "linear terms")
        for i, j in self.quadratic:
            if not 0 <= i < j < self.n:
                raise FormulationError(f"Invalid quadratic key ({i}, {j})")

    @classmethod
    def from_terms(
        cls,
        n: int,
        linear: Sequence[Any] | Mapping[int, Any] | None = None,
        quadratic: Mapping[Edge, Any] | Iterable[Tuple[Edge, Any]] | None = None,
        offset: Any = 0,
    ) -> QuboModel:
        lin: List[Fraction] = [Fraction(0)] * n
        if isinstance(linear, Mapping):
            for i, value in linear.items():
                _check_index(i, n)
                lin[i] += to_fraction(value)
        elif linear is not None:
            if len(linear) != n:
                raise DimensionError(n, len(linear), "linear terms")
            lin = [to_fraction(value) for value in linear]
        quad: Dict[Edge, Fraction] = {}
        items = quadratic.items() if isinstance(quadratic, Mapping) else quadratic
        for (i, j), value in items or ():
            _check_index(i, n)
            _check_index(j, n)
            coefficient = to_fraction(value)
            if i == j:
                # x * x == x for binary x
                lin[i] += coefficient
                continue
            key = (i, j) if i < j else (j, i)
            quad[key] = quad.get(key, Fraction(0)) + coefficient
        quad = {key: value for key, value in sorted(quad.items()) if value != 0}
        return cls(
            n=n,
            linear=tuple(lin),
            quadratic=MappingProxyType(quad),
            offset=to_fraction(offset),
        )

    @classmethod
    def zero(cls, n: int) -> QuboModel:
        return cls.from_terms(n)

    @classmethod
    def from_matrix(cls, matrix: Any, offset: Any = 0) -> QuboModel:
        """Model of ``x^T Q x + offset`` for a square, not necessarily symmetric Q."""
        q = np.asarray(matrix, dtype=object)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise FormulationError(f"Expected a square matrix, got shape {q.shape}")
        n = q.shape[0]
        quadratic = {
            (i, j): q[i, j] + q[j, i]
            for i in range(n)
            for j in range(i + 1, n)
            if q[i, j] != 0 or q[j, i] != 0
        }
        return cls.from_terms(n, [q[i, i] for i in range(n)], quadratic, offset)

    @cached_property
    def neighbors(self) -> Tuple[Tuple[Tuple[int, Fraction], ...], ...]:
        """Per-variable couplings ``(j, q_ij)``, used for O(degree) flips."""
        adjacency: List[List[Tuple[int, Fraction]]] = [[] for _ in range(self.n)]
        for (i, j), value in self.quadratic.items():
            adjacency[i].append((j, value))
            adjacency[j].append((i, value))
        return tuple(tuple(row) for row in adjacency)

    @cached_property
    def dense(self) -> Tuple[np.ndarray, np.ndarray]:
        """Float linear vector and symmetric coupling matrix for samplers."""
        linear = np.array([float(v) for v in self.linear], dtype=np.float64)
        couplings = np.zeros((self.n, self.n), dtype=np.float64)
        for (i, j), value in self.quadratic.items():
            couplings[i, j] = couplings[j, i] = float(value)
        return linear, couplings

    def merged(self, other: QuboModel) -> QuboModel:
        """Sum of two models over the same variables."""
        if other.n != self.n:
            raise DimensionError(self.n, other.n, "model")
        quad: Dict[Edge, Fraction] = dict(self.quadratic)
        for key, value in other.quadratic.items():
            quad[key] = quad.get(key, Fraction(0)) + value
        return QuboModel.from_terms(
            self.n,
            [a + b for a, b in zip(self.linear, other.linear)],
            quad,
            self.offset + other.offset,
        )

    def energy(self, x: Sequence[int]) -> Fraction:
        return evaluate(self, x)


def _check_index(i: int, n: int) -> None:
    if not 0 <= i < n:
        raise VariableIndexError(i, n)


def evaluate(model: QuboModel, x: Sequence[int]) -> Fraction:
    if len(x) != model.n:
        raise DimensionError(model.n, len(x))
    total = model.offset
    for coefficient, bit in zip(model.linear, x):
        if bit:
            total += coefficient
    for (i, j), coefficient in model.quadratic.items():
        if x[i] and x[j]:
            total += coefficient
    return total


def delta_flip(model: QuboModel, x: Sequence[int], i: int) -> Fraction:
    """Energy change caused by flipping bit ``i`` of ``x``."""
    if len(x) != model.n:
        raise DimensionError(model.n, len(x))
    _check_index(i, model.n)
    field_i = model.linear[i]
    for j, coefficient in model.neighbors[i]:
        if x[j]:
            field_i += coefficient
    return -field_i if x[i] else field_i


def flip_bound(model: QuboModel) -> Fraction:
    """Upper bound on ``|delta_flip|`` over all assignments and variables."""
    if model.n == 0:
        return Fraction(0)
    return max(
        abs(model.linear[i]) + sum((abs(q) for _, q in model.neighbors[i]), Fraction(0))
        for i in range(model.n)
    )


def quantize(model: QuboModel, bits: int) -> QuboModel:
    """Round every coefficient to a signed ``bits``-bit integer grid.

    The largest absolute coefficient is mapped to ``2**(bits-1) - 1``; the
    offset is scaled but not rounded. Minimizers may change.
    """
    if bits < 2:
        raise FormulationError("Quantization needs at least 2 bits")
    coefficients = [abs(v) for v in model.linear] + [
        abs(v) for v in model.quadratic.values()
    ]
    largest = max(coefficients, default=Fraction(0))
    if largest == 0:
        return model
    scale = Fraction(2 ** (bits - 1) - 1) / largest
    return QuboModel.from_terms(
        model.n,
        [Fraction(math.floor(v * scale + Fraction(1, 2))) for v in model.linear],
        {
            key: Fraction(math.floor(v * scale + Fraction(1, 2)))
            for key, v in model.quadratic.items()
        },
        model.offset * scale,
    )
