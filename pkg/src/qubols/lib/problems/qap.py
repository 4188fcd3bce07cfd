"""Quadratic assignment instances, objective and pair-exchange neighborhood."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from qubols.lib.problems.exceptions import (
    InvalidInstanceError,
    InvalidMoveError,
    ParseError,
)
from qubols.lib.problems.permutation import Permutation
from qubols.lib.qubo import DimensionError, FormulationError
from qubols.lib.utils import exact_array, to_fraction, tokenize

LOG = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class QapInstance:
    """Flow matrix ``w`` between facilities, distance matrix ``d`` between locations."""

    flow: np.ndarray
    dist: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        try:
            flow = exact_array(self.flow)
            dist = exact_array(self.dist)
        except (TypeError, ValueError) as e:
            raise InvalidInstanceError(f"Invalid QAP matrix entry: {e}") from e
        if flow.ndim != 2 or flow.shape[0] != flow.shape[1]:
            raise InvalidInstanceError(f"Flow matrix is not square: {flow.shape}")
        if dist.shape != flow.shape:
            raise InvalidInstanceError(
                f"Distance matrix shape {dist.shape} does not match {flow.shape}"
            )
        flow.flags.writeable = False
        dist.flags.writeable = False
        object.__setattr__(self, "flow", flow)
        object.__setattr__(self, "dist", dist)

    @property
    def n(self) -> int:
        return int(self.flow.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QapInstance):
            return NotImplemented
        return (
            self.n == other.n
            and bool(np.all(self.flow == other.flow))
            and bool(np.all(self.dist == other.dist))
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class ExchangePlan:
    """Disjoint facility pairs; bit ``j`` swaps the locations of ``pairs[j]``."""

    pairs: Tuple[Pair, ...]
    base: Permutation

    def __post_init__(self) -> None:
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        seen: set[int] = set()
        for a, b in pairs:
            if a == b:
                raise FormulationError(f"Pair ({a}, {b}) repeats a facility")
            for f in (a, b):
                if not 0 <= f < self.base.n:
                    raise FormulationError(f"Facility {f} out of range")
                if f in seen:
                    raise FormulationError(f"Facility {f} appears in two pairs")
                seen.add(f)
        object.__setattr__(self, "pairs", pairs)

    @property
    def m(self) -> int:
        return len(self.pairs)

    def decode(self, y: Sequence[int]) -> Permutation:
        if len(y) != self.m:
            raise DimensionError(self.m, len(y))
        image = list(self.base.image)
        for (a, b), bit in zip(self.pairs, y):
            if bit:
                image[a], image[b] = image[b], image[a]
        return Permutation(tuple(image))


@dataclass(frozen=True)
class SubsetFamily:
    """``m`` pairwise disjoint facility subsets, each of size ``k``."""

    subsets: Tuple[Tuple[int, ...], ...]
    k: int

    def __post_init__(self) -> None:
        subsets = tuple(tuple(int(f) for f in subset) for subset in self.subsets)
        seen: set[int] = set()
        for subset in subsets:
            if len(subset) != self.k:
                raise FormulationError(
                    f"Subset {list(subset)} does not have size {self.k}"
                )
            for f in subset:
                if f in seen:
                    raise FormulationError(f"Facility {f} appears in two subsets")
                seen.add(f)
        object.__setattr__(self, "subsets", subsets)

    @property
    def m(self) -> int:
        return len(self.subsets)

    @property
    def facilities(self) -> List[int]:
        return [f for subset in self.subsets for f in subset]


def parse_qaplib(text: str, name: str = "") -> QapInstance:
    """Parse ``n``, the ``n*n`` flow matrix, then the ``n*n`` distance matrix."""
    source = name or "QAPLIB data"
    tokens = tokenize(text)
    if not tokens:
        raise ParseError(source, "empty input")
    try:
        n = int(tokens[0])
    except ValueError as e:
        raise ParseError(source, f"size {tokens[0]!r} is not an integer") from e
    if n < 0:
        raise ParseError(source, f"negative size {n}")
    expected = 1 + 2 * n * n
    if len(tokens) != expected:
        raise ParseError(source, f"expected {expected} numbers, found {len(tokens)}")
    try:
        values = [to_fraction(token) for token in tokens[1:]]
    except ValueError as e:
        raise ParseError(source, str(e)) from e
    flow = np.array(values[: n * n], dtype=object).reshape(n, n)
    dist = np.array(values[n * n :], dtype=object).reshape(n, n)
    LOG.debug(f"Parsed QAP instance {source} with n={n}")
    return QapInstance(flow, dist, name)


def _format_matrix(matrix: np.ndarray) -> str:
    return "\n".join(
        " ".join(str(to_fraction(value)) for value in row) for row in matrix
    )


def serialize_qaplib(inst: QapInstance) -> str:
    return f"{inst.n}\n\n{_format_matrix(inst.flow)}\n\n{_format_matrix(inst.dist)}\n"


def parse_best_known(text: str) -> Dict[str, Fraction]:
    """Read ``instance-name value`` lines; ``#`` starts a comment."""
    best: Dict[str, Fraction] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(
                "best-known file", f"expected 'name value': {raw!r}", number
            )
        try:
            best[fields[0]] = to_fraction(fields[1])
        except ValueError as e:
            raise ParseError("best-known file", str(e), number) from e
    return best


def random_qap_instance(
    n: int, rng: np.random.Generator, high: int = 10, name: str = ""
) -> QapInstance:
    """Random integer flows and symmetric distances with a zero diagonal."""
    flow = rng.integers(0, high + 1, size=(n, n))
    dist = np.triu(rng.integers(1, high + 1, size=(n, n)), 1)
    return QapInstance(flow, dist + dist.T, name or f"random-{n}")


def qap_objective(inst: QapInstance, perm: Permutation) -> Fraction:
    """``sum_ij w_ij d_{perm(i) perm(j)}``."""
    if len(perm) != inst.n:
        raise DimensionError(inst.n, len(perm), "permutation")
    p = perm.as_array()
    return to_fraction((inst.flow * inst.dist[np.ix_(p, p)]).sum())


def pair_exchange_delta(
    inst: QapInstance, perm: Permutation, a: int, b: int
) -> Fraction:
    """Objective change of swapping the locations of ``a`` and ``b``, in O(n)."""
    n = inst.n
    if len(perm) != n:
        raise DimensionError(n, len(perm), "permutation")
    if not (0 <= a < n and 0 <= b < n):
        raise IndexError(f"Pair ({a}, {b}) out of range for n={n}")
    if a == b:
        raise InvalidMoveError(f"Cannot exchange facility {a} with itself")
    p = perm.as_array()
    swapped = p.copy()
    swapped[a], swapped[b] = p[b], p[a]
    rows = np.array([a, b])
    others = np.setdiff1d(np.arange(n), rows)
    w, d = inst.flow, inst.dist

    row_change = w[rows, :] * (
        d[np.ix_(swapped[rows], swapped)] - d[np.ix_(p[rows], p)]
    )
    col_change = w[np.ix_(others, rows)] * (
        d[np.ix_(p[others], swapped[rows])] - d[np.ix_(p[others], p[rows])]
    )
    return to_fraction(row_change.sum() + col_change.sum())


def pair_exchange_deltas(inst: QapInstance, perm: Permutation) -> np.ndarray:
    """All pair-exchange deltas as an ``n x n`` matrix with a zero diagonal.

    Entry ``[a, b]`` equals ``pair_exchange_delta(inst, perm, a, b)``.
    """
    if len(perm) != inst.n:
        raise DimensionError(inst.n, len(perm), "permutation")
    p = perm.as_array()
    w = inst.flow
    dp = inst.dist[np.ix_(p, p)]
    w_diag = np.diag(w)
    d_diag = np.diag(dp)
    w_aa, w_bb = w_diag[:, None], w_diag[None, :]
    d_aa, d_bb = d_diag[:, None], d_diag[None, :]
    w_ab, w_ba = w, w.T
    d_ab, d_ba = dp, dp.T

    # sums over every k of the row (out) and column (in) changes
    m1 = w @ dp.T
    m2 = w.T @ dp
    m1_diag, m2_diag = np.diag(m1), np.diag(m2)
    out_terms = m1 + m1.T - m1_diag[:, None] - m1_diag[None, :]
    in_terms = m2 + m2.T - m2_diag[:, None] - m2_diag[None, :]
    # remove k in {a, b} from those sums, then add the 2x2 block itself
    out_terms -= (w_aa - w_ba) * (d_ba - d_aa) + (w_ab - w_bb) * (d_bb - d_ab)
    in_terms -= (w_aa - w_ab) * (d_ab - d_aa) + (w_ba - w_bb) * (d_bb - d_ba)
    block = (w_aa - w_bb) * (d_bb - d_aa) + (w_ab - w_ba) * (d_ba - d_ab)
    deltas = out_terms + in_terms + block
    np.fill_diagonal(deltas, 0)
    return deltas


def rank_pairs(inst: QapInstance, perm: Permutation) -> List[Tuple[Fraction, int, int]]:
    """All pairs ``a < b`` by ascending delta, ties in lexicographic order."""
    deltas = pair_exchange_deltas(inst, perm)
    rows, cols = np.triu_indices(inst.n, 1)
    return sorted(
        (to_fraction(deltas[a, b]), int(a), int(b)) for a, b in zip(rows, cols)
    )


def _disjoint_prefix(pairs: Sequence[Pair], limit: int) -> List[Pair]:
    used: set[int] = set()
    kept: List[Pair] = []
    for a, b in pairs:
        if len(kept) >= limit:
            break
        if a in used or b in used:
            continue
        kept.append((a, b))
        used.update((a, b))
    return kept


def greedy_select_pairs(
    inst: QapInstance, perm: Permutation, m_max: int
) -> ExchangePlan:
    """Most improving disjoint pairs first, filled up to ``min(m_max, n // 2)``.

    Non-improving pairs are kept once the improving ones run out.
    """
    if m_max < 1:
        raise InvalidMoveError(f"m_max must be >= 1, got {m_max}")
    ranked = [(a, b) for _, a, b in rank_pairs(inst, perm)]
    pairs = _disjoint_prefix(ranked, min(m_max, inst.n // 2))
    return ExchangePlan(tuple(pairs), perm)


def random_select_pairs(
    perm: Permutation, m_max: int, rng: np.random.Generator
) -> ExchangePlan:
    if m_max < 1:
        raise InvalidMoveError(f"m_max must be >= 1, got {m_max}")
    order = [int(f) for f in rng.permutation(perm.n)]
    count = min(m_max, perm.n // 2)
    pairs = [
        (min(order[2 * j], order[2 * j + 1]), max(order[2 * j], order[2 * j + 1]))
        for j in range(count)
    ]
    return ExchangePlan(tuple(pairs), perm)


def subsets_from_pairs(
    n: int, ranked_pairs: Sequence[Pair], k: int, m_max: int
) -> SubsetFamily:
    """Group ranked pairs into disjoint subsets of size ``k``.

    Each subset takes the next ``k // 2`` unused pairs; odd ``k`` adds the
    lowest-index facility not used so far. Subsets that cannot be completed
    are dropped.
    """
    if k < 1:
        raise InvalidMoveError(f"k must be >= 1, got {k}")
    used: set[int] = set()
    queue = deque(ranked_pairs)
    subsets: List[Tuple[int, ...]] = []
    while len(subsets) < m_max:
        subset: List[int] = []
        while len(subset) < k - k % 2 and queue:
            a, b = queue.popleft()
            if a in used or b in used:
                continue
            subset.extend((a, b))
            used.update((a, b))
        if k % 2:
            spare = next((f for f in range(n) if f not in used), None)
            if spare is not None:
                subset.append(spare)
                used.add(spare)
        if len(subset) < k:
            break
        subsets.append(tuple(subset))
    return SubsetFamily(tuple(subsets), k)


def greedy_select_subsets(
    inst: QapInstance, perm: Permutation, k: int, m_max: int
) -> SubsetFamily:
    ranked = [(a, b) for _, a, b in rank_pairs(inst, perm)]
    return subsets_from_pairs(inst.n, ranked, k, m_max)


def random_select_subsets(
    n: int, k: int, m_max: int, rng: np.random.Generator
) -> SubsetFamily:
    if k < 1:
        raise InvalidMoveError(f"k must be >= 1, got {k}")
    order = [int(f) for f in rng.permutation(n)]
    count = min(m_max, n // k)
    return SubsetFamily(
        tuple(tuple(order[j * k : (j + 1) * k]) for j in range(count)), k
    )
