from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Dict, Mapping, Sequence, Tuple

from qubols.lib.qubo.exceptions import DimensionError, FormulationError
from qubols.lib.qubo.model import Edge, QuboModel
from qubols.lib.utils import to_fraction


@dataclass(frozen=True)
class IsingModel:
    """Spin model ``offset + sum(h_i s_i) + sum(J_ij s_i s_j)``, ``s_i = ±1``."""

    n: int
    h: Tuple[Fraction, ...]
    J: Mapping[Edge, Fraction]
    offset: Fraction = field(default=Fraction(0))

    def __post_init__(self) -> None:
        if len(self.h) != self.n:
            raise DimensionError(self.n, len(self.h), "local fields")
        for i, j in self.J:
            if not 0 <= i < j < self.n:
                raise FormulationError(f"Invalid coupling key ({i}, {j})")

    @classmethod
    def from_terms(
        cls,
        n: int,
        h: Sequence[Any] | None = None,
        J: Mapping[Edge, Any] | None = None,
        offset: Any = 0,
    ) -> IsingModel:
        fields = [to_fraction(v) for v in h] if h is not None else [Fraction(0)] * n
        if len(fields) != n:
            raise DimensionError(n, len(fields), "local fields")
        couplings: Dict[Edge, Fraction] = {}
        constant = to_fraction(offset)
        for (i, j), value in (J or {}).items():
            coefficient = to_fraction(value)
            if i == j:
                # s * s == 1
                constant += coefficient
                continue
            key = (i, j) if i < j else (j, i)
            couplings[key] = couplings.get(key, Fraction(0)) + coefficient
        couplings = {k: v for k, v in sorted(couplings.items()) if v != 0}
        return cls(n, tuple(fields), MappingProxyType(couplings), constant)


def evaluate_ising(model: IsingModel, spins: Sequence[int]) -> Fraction:
    if len(spins) != model.n:
        raise DimensionError(model.n, len(spins), "spin configuration")
    if any(s not in (-1, 1) for s in spins):
        raise ValueError("Spins must be -1 or +1")
    total = model.offset
    for h_i, s in zip(model.h, spins):
        total += h_i * s
    for (i, j), coupling in model.J.items():
        total += coupling * spins[i] * spins[j]
    return total


def spins_to_bits(spins: Sequence[int]) -> Tuple[int, ...]:
    return tuple((s + 1) // 2 for s in spins)


def bits_to_spins(bits: Sequence[int]) -> Tuple[int, ...]:
    return tuple(2 * b - 1 for b in bits)


def ising_to_qubo(m: IsingModel) -> QuboModel:
    """Substitute ``s_i = 2 x_i - 1``."""
    linear = [2 * h_i for h_i in m.h]
    offset = m.offset - sum(m.h, Fraction(0))
    quadratic: Dict[Edge, Fraction] = {}
    for (i, j), coupling in m.J.items():
        # J (2x_i - 1)(2x_j - 1) = 4J x_i x_j - 2J x_i - 2J x_j + J
        quadratic[(i, j)] = 4 * coupling
        linear[i] -= 2 * coupling
        linear[j] -= 2 * coupling
        offset += coupling
    return QuboModel.from_terms(m.n, linear, quadratic, offset)


def qubo_to_ising(m: QuboModel) -> IsingModel:
    """Substitute ``x_i = (s_i + 1) / 2``."""
    h = [a / 2 for a in m.linear]
    offset = m.offset + sum(m.linear, Fraction(0)) / 2
    couplings: Dict[Edge, Fraction] = {}
    for (i, j), q in m.quadratic.items():
        # q (s_i + 1)(s_j + 1) / 4
        quarter = q / 4
        couplings[(i, j)] = quarter
        h[i] += quarter
        h[j] += quarter
        offset += quarter
    return IsingModel.from_terms(m.n, h, couplings, offset)
