"""Undirected weighted graphs shared by the M2sP and partitioning problems."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Dict, Iterable, Optional, Tuple

import networkx as nx
import numpy as np

from qubols.lib.problems.exceptions import InvalidInstanceError, ParseError
from qubols.lib.utils import exact_array, to_fraction

LOG = logging.getLogger(__name__)

WeightedEdge = Tuple[int, int, Fraction]


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edges are stored once as ``(u, v, w)`` with ``u < v``, sorted.
    """

    n: int
    edges: Tuple[WeightedEdge, ...]
    name: str = ""

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidInstanceError(f"Negative vertex count {self.n}")
        seen: set[Tuple[int, int]] = set()
        edges: list[WeightedEdge] = []
        for u, v, w in self.edges:
            w = to_fraction(w)
            if u == v:
                raise InvalidInstanceError(f"Self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInstanceError(f"Edge ({u}, {v}) outside 0..{self.n - 1}")
            if w < 0:
                raise InvalidInstanceError(f"Negative weight {w} on edge ({u}, {v})")
            key = (int(min(u, v)), int(max(u, v)))
            if key in seen:
                raise InvalidInstanceError(f"Repeated edge {key}")
            seen.add(key)
            edges.append((key[0], key[1], w))
        object.__setattr__(self, "edges", tuple(sorted(edges)))

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[Tuple[Any, ...]], name: str = ""
    ) -> WeightedGraph:
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples, summing repeated pairs."""
        weights: Dict[Tuple[int, int], Fraction] = {}
        for edge in edges:
            u, v = int(edge[0]), int(edge[1])
            w = to_fraction(edge[2]) if len(edge) > 2 else Fraction(1)
            key = (min(u, v), max(u, v))
            weights[key] = weights.get(key, Fraction(0)) + w
        return cls(n, tuple((u, v, w) for (u, v), w in sorted(weights.items())), name)

    @classmethod
    def from_networkx(
        cls, graph: nx.Graph, weight: str = "weight", name: str = ""
    ) -> WeightedGraph:
        """Relabel nodes to ``0..n-1`` in node iteration order."""
        relabeled = nx.convert_node_labels_to_integers(graph)
        edges = [
            (u, v, data.get(weight, 1)) for u, v, data in relabeled.edges(data=True)
        ]
        return cls.from_edges(relabeled.number_of_nodes(), edges, name)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_weighted_edges_from(self.edges)
        return graph

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def weight_matrix(self) -> np.ndarray:
        """Exact symmetric adjacency matrix."""
        matrix = np.zeros((self.n, self.n), dtype=object)
        for u, v, w in self.edges:
            matrix[u, v] = matrix[v, u] = w
        return exact_array(matrix)

    @cached_property
    def neighbors(self) -> Tuple[Tuple[Tuple[int, Fraction], ...], ...]:
        adjacency: list[list[Tuple[int, Fraction]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            adjacency[u].append((v, w))
            adjacency[v].append((u, w))
        return tuple(tuple(row) for row in adjacency)


def laplacian(g: WeightedGraph) -> np.ndarray:
    """Exact weighted Laplacian ``D - W``."""
    w = g.weight_matrix
    return np.diag(w.sum(axis=1)) - w


def parse_edge_list(
    text: str, n: Optional[int] = None, name: str = ""
) -> WeightedGraph:
    """Parse ``u v [w]`` lines with 0-based vertices; ``#`` starts a comment.

    Repeated pairs are merged by summing weights and self-loops are dropped.
    ``n`` defaults to one more than the largest vertex index.
    """
    source = name or "edge list"
    weights: Dict[Tuple[int, int], Fraction] = {}
    largest = -1
    self_loops = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if len(fields) not in (2, 3):
            raise ParseError(source, f"expected 'u v [w]', got {raw!r}", number)
        try:
            u, v = int(fields[0]), int(fields[1])
            w = to_fraction(fields[2]) if len(fields) == 3 else Fraction(1)
        except ValueError as e:
            raise ParseError(source, str(e), number) from e
        if u < 0 or v < 0:
            raise ParseError(source, f"negative vertex index in {raw!r}", number)
        if w < 0:
            raise ParseError(source, f"negative weight {fields[2]}", number)
        largest = max(largest, u, v)
        if u == v:
            self_loops += 1
            continue
        key = (min(u, v), max(u, v))
        weights[key] = weights.get(key, Fraction(0)) + w
    if self_loops:
        LOG.warning(f"Dropped {self_loops} self-loop(s) from {source}")
    size = largest + 1 if n is None else n
    if largest >= size:
        raise ParseError(source, f"vertex {largest} outside 0..{size - 1}")
    return WeightedGraph.from_edges(
        size, ((u, v, w) for (u, v), w in weights.items()), name
    )


def parse_dimacs(text: str, name: str = "") -> WeightedGraph:
    """Parse DIMACS ``p edge n m`` / ``e u v`` files with 1-based vertices."""
    source = name or "DIMACS graph"
    n: Optional[int] = None
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        if fields[0] == "p":
            if len(fields) != 4:
                raise ParseError(source, f"bad problem line {raw!r}", number)
            try:
                n = int(fields[2])
            except ValueError as e:
                raise ParseError(source, str(e), number) from e
        elif fields[0] == "e" and len(fields) in (3, 4):
            try:
                u, v = int(fields[1]) - 1, int(fields[2]) - 1
            except ValueError as e:
                raise ParseError(source, str(e), number) from e
            lines.append(" ".join([str(u), str(v), *fields[3:]]))
        else:
            raise ParseError(source, f"unexpected line {raw!r}", number)
    if n is None:
        raise ParseError(source, "missing 'p edge' line")
    return parse_edge_list("\n".join(lines), n, name)


def parse_graph(text: str, name: str = "") -> WeightedGraph:
    """Edge list or DIMACS, chosen by the presence of a ``p`` line."""
    for raw in text.splitlines():
        fields = raw.split()
        if fields and fields[0] == "p":
            return parse_dimacs(text, name)
    return parse_edge_list(text, name=name)


GRAPH_FAMILIES: Dict[str, Callable[..., nx.Graph]] = {
    "balanced-tree": nx.balanced_tree,
    "ladder": nx.ladder_graph,
    "turan": nx.turan_graph,
    "grid": nx.grid_2d_graph,
    "path": nx.path_graph,
    "cycle": nx.cycle_graph,
    "complete": nx.complete_graph,
    "gnp": nx.gnp_random_graph,
}


def generate_graph(family: str, *args: Any, **kwargs: Any) -> WeightedGraph:
    """Unit-weight graph from a networkx generator family."""
    try:
        generator = GRAPH_FAMILIES[family]
    except KeyError as e:
        known = ", ".join(sorted(GRAPH_FAMILIES))
        raise InvalidInstanceError(f"Unknown graph family {family!r} ({known})") from e
    graph = generator(*args, **kwargs)
    label = "-".join([family, *(str(a) for a in args)])
    return WeightedGraph.from_networkx(graph, name=label)
