from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Optional, Tuple

from qubols.lib.constants import ProblemKind, Rounding, TspFormat
from qubols.lib.local_search import (
    LocalSearchProblem,
    M2spProblem,
    PartitionProblem,
    QapProblem,
    TspProblem,
)
from qubols.lib.problems import (
    ParseError,
    parse_coordinates,
    parse_distance_matrix,
    parse_graph,
    parse_qaplib,
)

LOG = logging.getLogger(__name__)


def parse_initial_solution(
    text: str, source: str = "initial solution"
) -> Tuple[int, ...]:
    """Whitespace separated 0-based integers; ``#`` starts a comment."""
    values = []
    for number, raw in enumerate(text.splitlines(), start=1):
        for token in raw.split("#", 1)[0].split():
            try:
                values.append(int(token))
            except ValueError as e:
                raise ParseError(source, f"not an integer: {token!r}", number) from e
    return tuple(values)


def read_initial_solution(path: Path) -> Tuple[int, ...]:
    return parse_initial_solution(Path(path).read_text(), str(path))


def problem_from_text(
    kind: ProblemKind,
    text: str,
    name: str,
    parts: int = 2,
    tsp_format: TspFormat = TspFormat.MATRIX,
    rounding: Rounding = Rounding.NONE,
) -> LocalSearchProblem[Any]:
    kind = ProblemKind(kind)
    if kind == ProblemKind.QAP:
        return QapProblem(parse_qaplib(text, name), name)
    if kind == ProblemKind.M2SP:
        return M2spProblem(parse_graph(text, name), name)
    if kind == ProblemKind.TSP:
        if TspFormat(tsp_format) == TspFormat.COORDINATES:
            return TspProblem(parse_coordinates(text, rounding, name), name)
        return TspProblem(parse_distance_matrix(text, name), name)
    return PartitionProblem(parse_graph(text, name), parts, name)


def load_problem(
    kind: ProblemKind,
    path: Path,
    name: Optional[str] = None,
    parts: int = 2,
    tsp_format: TspFormat = TspFormat.MATRIX,
    rounding: Rounding = Rounding.NONE,
) -> LocalSearchProblem[Any]:
    """Read an instance file; the name defaults to the file stem."""
    path = Path(path)
    name = name or path.stem
    problem = problem_from_text(
        kind, path.read_text(), name, parts, tsp_format, rounding
    )
    LOG.debug(f"Loaded {ProblemKind(kind).value} instance {name}, size {problem.size}")
    return problem
