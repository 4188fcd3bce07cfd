"""Balanced K-way graph partitioning with pairwise swap moves."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from qubols.lib.problems.exceptions import (
    InvalidMoveError,
    InvalidSolutionError,
    ParseError,
)
from qubols.lib.problems.graph import WeightedGraph
from qubols.lib.qubo import (
    BitString,
    DimensionError,
    Edge,
    FormulationError,
    PenaltyConfig,
    QuboModel,
    add_cardinality_penalties,
)
from qubols.lib.utils import to_fraction

LOG = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True)
class Partition:
    """Part label ``assignment[u]`` in ``0..k-1`` for every vertex ``u``."""

    assignment: Tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        assignment = tuple(int(part) for part in self.assignment)
        if self.k < 1:
            raise InvalidSolutionError(f"Need at least one part, got k={self.k}")
        for u, part in enumerate(assignment):
            if not 0 <= part < self.k:
                raise InvalidSolutionError(
                    f"Vertex {u} has part {part} outside 0..{self.k - 1}"
                )
        object.__setattr__(self, "assignment", assignment)

    @classmethod
    def balanced(cls, assignment: Sequence[int], k: int) -> Partition:
        """Construct and require every part to hold exactly ``n / k`` vertices."""
        partition = cls(tuple(assignment), k)
        if not partition.is_balanced():
            raise InvalidSolutionError(
                f"Partition is not balanced: {partition.sizes()}"
            )
        return partition

    @property
    def n(self) -> int:
        return len(self.assignment)

    def __getitem__(self, u: int) -> int:
        return self.assignment[u]

    def sizes(self) -> List[int]:
        counts = Counter(self.assignment)
        return [counts.get(part, 0) for part in range(self.k)]

    def is_balanced(self) -> bool:
        return self.n % self.k == 0 and all(
            size == self.n // self.k for size in self.sizes()
        )

    def members(self, part: int) -> List[int]:
        return [u for u, label in enumerate(self.assignment) if label == part]


@dataclass(frozen=True)
class SwapMatching:
    """Pairwise disjoint vertex pairs whose part labels may be exchanged."""

    pairs: Tuple[Pair, ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(u), int(v)) for u, v in self.pairs)
        seen: set[int] = set()
        for u, v in pairs:
            for vertex in (u, v):
                if vertex in seen:
                    raise FormulationError(f"Vertex {vertex} appears in two pairs")
                seen.add(vertex)
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def balanced_partition(n: int, k: int) -> Partition:
    """Consecutive blocks of ``n / k`` vertices."""
    if k < 1 or n % k:
        raise InvalidSolutionError(f"{n} vertices cannot be split into {k} equal parts")
    size = n // k
    return Partition(tuple(u // size for u in range(n)), k)


def random_balanced_partition(n: int, k: int, rng: np.random.Generator) -> Partition:
    base = balanced_partition(n, k).assignment
    return Partition(tuple(base[int(u)] for u in rng.permutation(n)), k)


def _check_size(g: WeightedGraph, p: Partition) -> None:
    if p.n != g.n:
        raise DimensionError(g.n, p.n, "partition")


def cut_value(g: WeightedGraph, p: Partition) -> Fraction:
    _check_size(g, p)
    return sum((w for u, v, w in g.edges if p[u] != p[v]), Fraction(0))


def external_degree(g: WeightedGraph, p: Partition, u: int) -> Fraction:
    """``E_u``: weight from ``u`` to vertices of other parts."""
    _check_size(g, p)
    return sum((w for v, w in g.neighbors[u] if p[v] != p[u]), Fraction(0))


def internal_degree(g: WeightedGraph, p: Partition, u: int) -> Fraction:
    """``I_u``: weight from ``u`` to vertices of its own part."""
    _check_size(g, p)
    return sum((w for v, w in g.neighbors[u] if p[v] == p[u]), Fraction(0))


def _degree_towards(g: WeightedGraph, p: Partition, u: int, part: int) -> Fraction:
    return sum((w for v, w in g.neighbors[u] if p[v] == part), Fraction(0))


def kl_gain(g: WeightedGraph, p: Partition, u: int, v: int) -> Fraction:
    """Cut reduction of exchanging the parts of ``u`` and ``v``.

    ``D_u + D_v - 2 w_uv`` where ``D_u`` counts ``u``'s weight towards the part
    of ``v`` minus its internal degree. With two parts that is ``E_u - I_u``.
    """
    _check_size(g, p)
    if p[u] == p[v]:
        raise InvalidMoveError(f"Vertices {u} and {v} are both in part {p[u]}")
    d_u = _degree_towards(g, p, u, p[v]) - internal_degree(g, p, u)
    d_v = _degree_towards(g, p, v, p[u]) - internal_degree(g, p, v)
    w_uv = to_fraction(g.weight_matrix[u, v])
    return d_u + d_v - 2 * w_uv


def swap_gains(g: WeightedGraph, p: Partition) -> np.ndarray:
    """``kl_gain`` for every vertex pair; same-part entries are meaningless."""
    _check_size(g, p)
    labels = np.asarray(p.assignment, dtype=np.intp)
    w = g.weight_matrix
    membership = np.zeros((g.n, p.k), dtype=np.int64)
    membership[np.arange(g.n), labels] = 1
    towards = (w @ membership)[:, labels]  # [u, v]: weight from u to part of v
    internal = np.diag(towards)
    return towards - internal[:, None] + towards.T - internal[None, :] - 2 * w


def _disjoint(pairs: Sequence[Pair], limit: int) -> SwapMatching:
    used: set[int] = set()
    kept: List[Pair] = []
    for u, v in pairs:
        if len(kept) >= limit:
            break
        if u in used or v in used:
            continue
        kept.append((u, v))
        used.update((u, v))
    return SwapMatching(tuple(kept))


def select_swap_matching(g: WeightedGraph, p: Partition, m_max: int) -> SwapMatching:
    """Cross-part pairs by descending gain, ties lexicographic, kept if disjoint."""
    gains = swap_gains(g, p)
    ranked = sorted(
        (-to_fraction(gains[u, v]), u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if p[u] != p[v]
    )
    return _disjoint([(u, v) for _, u, v in ranked], m_max)


def random_swap_matching(
    g: WeightedGraph, p: Partition, m_max: int, rng: np.random.Generator
) -> SwapMatching:
    """Disjoint cross-part pairs in random order."""
    _check_size(g, p)
    order = [int(u) for u in rng.permutation(g.n)]
    pairs = [
        (min(u, v), max(u, v))
        for i, u in enumerate(order)
        for v in order[i + 1 :]
        if p[u] != p[v]
    ]
    shuffled = [pairs[int(i)] for i in rng.permutation(len(pairs))]
    return _disjoint(shuffled, m_max)


def _check_matching(p: Partition, matching: SwapMatching) -> None:
    for u, v in matching.pairs:
        if not (0 <= u < p.n and 0 <= v < p.n):
            raise InvalidMoveError(f"Pair ({u}, {v}) outside 0..{p.n - 1}")
        if p[u] == p[v]:
            raise InvalidMoveError(f"Pair ({u}, {v}) lies inside part {p[u]}")


def apply_swaps(p: Partition, matching: SwapMatching, y: Sequence[int]) -> Partition:
    if len(y) != len(matching):
        raise DimensionError(len(matching), len(y))
    _check_matching(p, matching)
    labels = list(p.assignment)
    for (u, v), bit in zip(matching.pairs, y):
        if bit:
            labels[u], labels[v] = labels[v], labels[u]
    return Partition(tuple(labels), p.k)


def build_swap_qubo(
    g: WeightedGraph, p: Partition, matching: SwapMatching
) -> QuboModel:
    """One variable per pair; energy is twice the cut after the selected swaps.

    Every edge contributes ``2 w`` when its endpoints end up in different
    parts: a constant if neither endpoint moves, a linear term if one pair is
    involved and a bilinear term across two pairs.
    """
    _check_size(g, p)
    _check_matching(p, matching)
    m = len(matching)
    slot: Dict[int, Tuple[int, int]] = {}
    for j, (u, v) in enumerate(matching.pairs):
        slot[u] = (j, p[v])
        slot[v] = (j, p[u])

    def part_of(vertex: int, bit: int) -> int:
        return slot[vertex][1] if bit else p[vertex]

    linear = [Fraction(0)] * m
    quadratic: Dict[Edge, Fraction] = {}
    offset = Fraction(0)
    for a, b, w in g.edges:
        weight = 2 * w
        ja = slot[a][0] if a in slot else None
        jb = slot[b][0] if b in slot else None
        if ja is None and jb is None:
            offset += weight * (p[a] != p[b])
        elif ja is not None and jb is not None and ja != jb:
            t = {
                (s, r): weight * (part_of(a, s) != part_of(b, r))
                for s in (0, 1)
                for r in (0, 1)
            }
            offset += t[0, 0]
            linear[ja] += t[1, 0] - t[0, 0]
            linear[jb] += t[0, 1] - t[0, 0]
            key = (min(ja, jb), max(ja, jb))
            quadratic[key] = quadratic.get(key, Fraction(0)) + (
                t[1, 1] - t[1, 0] - t[0, 1] + t[0, 0]
            )
        else:
            j = ja if ja is not None else jb
            assert j is not None
            before = weight * (part_of(a, 0) != part_of(b, 0))
            after = weight * (
                part_of(a, int(ja == j)) != part_of(b, int(jb == j))
            )
            offset += before
            linear[j] += after - before
    return QuboModel.from_terms(m, linear, quadratic, offset)


def full_gp_qubo(g: WeightedGraph, k: int, penalties: PenaltyConfig) -> QuboModel:
    """Variable ``u * k + l`` puts vertex ``u`` in part ``l``.

    Feasible assignments score twice the cut. Penalty groups are the ``n``
    one-part-per-vertex rows followed by the ``k`` part-size columns.
    """
    if k < 1 or g.n % k:
        raise FormulationError(f"{g.n} vertices cannot be split into {k} equal parts")
    linear = [Fraction(0)] * (g.n * k)
    quadratic: Dict[Edge, Fraction] = {}
    for u, v, w in g.edges:
        for part in range(k):
            a, b = u * k + part, v * k + part
            linear[a] += w
            linear[b] += w
            quadratic[(a, b)] = quadratic.get((a, b), Fraction(0)) - 2 * w
    objective = QuboModel.from_terms(g.n * k, linear, quadratic)
    rows = [[u * k + part for part in range(k)] for u in range(g.n)]
    columns = [[u * k + part for u in range(g.n)] for part in range(k)]
    targets = [1] * g.n + [g.n // k] * k
    return add_cardinality_penalties(
        objective, rows + columns, targets, penalties, objective
    )


def partition_bits(p: Partition) -> BitString:
    bits = [0] * (p.n * p.k)
    for u, part in enumerate(p.assignment):
        bits[u * p.k + part] = 1
    return tuple(bits)


def decode_full_gp(bits: Sequence[int], n: int, k: int) -> Optional[Partition]:
    """Balanced partition encoded by ``bits``, or ``None`` if infeasible."""
    if len(bits) != n * k:
        raise DimensionError(n * k, len(bits))
    matrix = np.asarray(bits, dtype=np.int64).reshape(n, k)
    if not np.all(matrix.sum(axis=1) == 1):
        return None
    partition = Partition(tuple(int(c) for c in np.argmax(matrix, axis=1)), k)
    return partition if partition.is_balanced() else None


def parse_partition(text: str, k: Optional[int] = None, name: str = "") -> Partition:
    """One 0-based part label per line; ``k`` defaults to the largest label + 1."""
    source = name or "partition"
    labels = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            labels.append(int(line))
        except ValueError as e:
            raise ParseError(source, f"not a part label: {raw!r}", number) from e
    parts = k if k is not None else max(labels, default=-1) + 1
    try:
        return Partition(tuple(labels), max(parts, 1))
    except InvalidSolutionError as e:
        raise ParseError(source, str(e)) from e


def serialize_partition(p: Partition) -> str:
    return "".join(f"{part}\n" for part in p.assignment)
