"""Symmetric TSP tours, segment decomposition and k-reversal moves."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from qubols.lib.constants import Rounding
from qubols.lib.problems.exceptions import (
    InvalidInstanceError,
    InvalidMoveError,
    InvalidSolutionError,
    ParseError,
)
from qubols.lib.qubo import DimensionError, Edge, QuboModel
from qubols.lib.utils import exact_array, to_fraction, tokenize

LOG = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TspInstance:
    """Symmetric, non-negative distances with a zero diagonal."""

    dist: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        try:
            dist = exact_array(self.dist)
        except (TypeError, ValueError) as e:
            raise InvalidInstanceError(f"Invalid distance entry: {e}") from e
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise InvalidInstanceError(f"Distance matrix is not square: {dist.shape}")
        if not np.all(dist == dist.T):
            raise InvalidInstanceError("Distance matrix is not symmetric")
        if np.any(np.diag(dist) != 0):
            raise InvalidInstanceError("Distance matrix has a non-zero diagonal")
        if np.any(dist < 0):
            raise InvalidInstanceError("Distance matrix has negative entries")
        dist.flags.writeable = False
        object.__setattr__(self, "dist", dist)

    @property
    def n(self) -> int:
        return int(self.dist.shape[0])

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        return to_fraction(self.dist[key])


@dataclass(frozen=True)
class Tour:
    """Cyclic visiting order of all cities."""

    order: Tuple[int, ...]

    def __post_init__(self) -> None:
        order = tuple(int(c) for c in self.order)
        if sorted(order) != list(range(len(order))):
            raise InvalidSolutionError(f"Not a tour: {list(order)}")
        object.__setattr__(self, "order", order)

    @classmethod
    def identity(cls, n: int) -> Tour:
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> Tour:
        return cls(tuple(int(c) for c in rng.permutation(n)))

    @property
    def n(self) -> int:
        return len(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def canonical(self) -> Tuple[int, ...]:
        """Rotation starting at city 0, in the direction of its smaller neighbor."""
        if self.n < 3:
            return tuple(sorted(self.order))
        start = self.order.index(0)
        rotated = self.order[start:] + self.order[:start]
        backwards = (0, *reversed(rotated[1:]))
        return min(rotated, backwards)


class SegmentDecomposition(NamedTuple):
    """Tour split into ``k`` directed segments; segment ``i`` runs head to tail."""

    tour: Tour
    cuts: Tuple[int, ...]
    segments: Tuple[Tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.segments)

    @property
    def heads(self) -> Tuple[int, ...]:
        return tuple(segment[0] for segment in self.segments)

    @property
    def tails(self) -> Tuple[int, ...]:
        return tuple(segment[-1] for segment in self.segments)


class KReversalQubo(NamedTuple):
    model: QuboModel
    internal_weight: Fraction


def tour_length(inst: TspInstance, tour: Tour) -> Fraction:
    if tour.n != inst.n:
        raise DimensionError(inst.n, tour.n, "tour")
    order = np.asarray(tour.order, dtype=np.intp)
    return to_fraction(inst.dist[order, np.roll(order, -1)].sum())


def decompose(tour: Tour, cut_positions: Sequence[int]) -> SegmentDecomposition:
    """Remove the edges ``order[c] -> order[c + 1]`` for every cut ``c``.

    Segments follow the tour starting after the smallest cut, so their
    concatenation is a rotation of the tour.
    """
    n = tour.n
    cuts = tuple(sorted(int(c) for c in cut_positions))
    if len(cuts) < 2:
        raise InvalidMoveError(f"Need at least 2 cuts, got {len(cuts)}")
    if len(set(cuts)) != len(cuts):
        raise InvalidMoveError(f"Duplicate cut positions: {list(cut_positions)}")
    if cuts[0] < 0 or cuts[-1] >= n:
        raise InvalidMoveError(f"Cut positions outside 0..{n - 1}")
    order = tour.order
    segments = []
    for i, cut in enumerate(cuts):
        end = cuts[i + 1] if i + 1 < len(cuts) else cuts[0] + n
        segments.append(tuple(order[t % n] for t in range(cut + 1, end + 1)))
    return SegmentDecomposition(tour, cuts, tuple(segments))


def internal_weight(inst: TspInstance, decomp: SegmentDecomposition) -> Fraction:
    total = Fraction(0)
    for segment in decomp.segments:
        for a, b in zip(segment, segment[1:]):
            total += inst[a, b]
    return total


def build_k_reversal_qubo(
    inst: TspInstance, decomp: SegmentDecomposition
) -> KReversalQubo:
    """Connecting-edge weight as a function of which segments are reversed.

    ``y_i = 1`` reverses segment ``i``. The connection from segment ``i`` to
    ``j = i + 1 (mod k)`` leaves through the tail ``v_i`` (or the head ``u_i``
    when reversed) and enters through ``u_j`` (or ``v_j``).
    """
    k = decomp.k
    heads, tails = decomp.heads, decomp.tails
    linear = [Fraction(0)] * k
    quadratic: Dict[Edge, Fraction] = {}
    offset = Fraction(0)
    for i in range(k):
        j = (i + 1) % k
        keep = inst[tails[i], heads[j]]
        out_reversed = inst[heads[i], heads[j]]
        in_reversed = inst[tails[i], tails[j]]
        both = inst[heads[i], tails[j]]
        offset += keep
        linear[i] += out_reversed - keep
        linear[j] += in_reversed - keep
        key = (min(i, j), max(i, j))
        quadratic[key] = quadratic.get(key, Fraction(0)) + (
            keep - out_reversed - in_reversed + both
        )
    model = QuboModel.from_terms(k, linear, quadratic, offset)
    return KReversalQubo(model, internal_weight(inst, decomp))


def apply_reversals(decomp: SegmentDecomposition, y: Sequence[int]) -> Tour:
    if len(y) != decomp.k:
        raise DimensionError(decomp.k, len(y))
    order: List[int] = []
    for segment, bit in zip(decomp.segments, y):
        order.extend(reversed(segment) if bit else segment)
    return Tour(tuple(order))


def random_cut_positions(n: int, k: int, rng: np.random.Generator) -> Tuple[int, ...]:
    if not 2 <= k <= n:
        raise InvalidMoveError(f"Need 2 <= k <= n, got k={k}, n={n}")
    return tuple(sorted(int(c) for c in rng.choice(n, size=k, replace=False)))


def two_opt_delta(inst: TspInstance, tour: Tour, i: int, j: int) -> Fraction:
    """Length change of reversing ``order[i + 1 .. j]`` for ``0 <= i < j < n``."""
    n = tour.n
    if not 0 <= i < j < n:
        raise InvalidMoveError(f"Need 0 <= i < j < n, got i={i}, j={j}")
    order = tour.order
    a, b, c, d = order[i], order[i + 1], order[j], order[(j + 1) % n]
    return inst[a, c] + inst[b, d] - inst[a, b] - inst[c, d]


def two_opt_move(tour: Tour, i: int, j: int) -> Tour:
    order = tour.order
    return Tour(order[: i + 1] + tuple(reversed(order[i + 1 : j + 1])) + order[j + 1 :])


def parse_distance_matrix(text: str, name: str = "") -> TspInstance:
    """``n`` followed by ``n*n`` distances, row-major."""
    source = name or "distance matrix"
    tokens = tokenize(text)
    if not tokens:
        raise ParseError(source, "empty input")
    try:
        n = int(tokens[0])
        values = [to_fraction(token) for token in tokens[1:]]
    except ValueError as e:
        raise ParseError(source, str(e)) from e
    if n < 0 or len(values) != n * n:
        raise ParseError(source, f"expected {n * n} distances, found {len(values)}")
    try:
        return TspInstance(np.array(values, dtype=object).reshape(n, n), name)
    except InvalidInstanceError as e:
        raise ParseError(source, str(e)) from e


def parse_coordinates(
    text: str, rounding: Rounding = Rounding.NONE, name: str = ""
) -> TspInstance:
    """One ``x y`` city per line; Euclidean distances, optionally rounded."""
    source = name or "coordinates"
    points = []
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if len(fields) != 2:
            raise ParseError(source, f"expected 'x y', got {raw!r}", number)
        try:
            points.append((float(fields[0]), float(fields[1])))
        except ValueError as e:
            raise ParseError(source, str(e), number) from e
    coords = np.array(points, dtype=np.float64).reshape(-1, 2)
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    if Rounding(rounding) == Rounding.NEAREST:
        dist = np.floor(dist + 0.5).astype(np.int64)
    if not np.all(np.isfinite(dist)):
        raise ParseError(source, "non-finite coordinates")
    LOG.debug(f"Parsed {len(points)} cities from {source}")
    return TspInstance(dist, name)


def random_tsp_instance(
    n: int, rng: np.random.Generator, high: int = 100, name: str = ""
) -> TspInstance:
    dist = np.triu(rng.integers(1, high + 1, size=(n, n)), 1)
    return TspInstance(dist + dist.T, name or f"random-{n}")


def reachable_tours(decomp: SegmentDecomposition) -> set[Tuple[int, ...]]:
    """Canonical forms of the tours reachable by one k-reversal move."""
    k = decomp.k
    tours: set[Tuple[int, ...]] = set()
    for code in range(2**k):
        y = [(code >> (k - 1 - i)) & 1 for i in range(k)]
        tours.add(apply_reversals(decomp, y).canonical())
    return tours
