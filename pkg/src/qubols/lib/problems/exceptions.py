from __future__ import annotations

from typing import Optional


class ProblemError(Exception):
    pass


class ParseError(ProblemError, ValueError):
    def __init__(self, source: str, reason: str, line: Optional[int] = None) -> None:
        where = source if line is None else f"{source}, line {line}"
        super().__init__(f"Cannot parse {where}: {reason}")


class InvalidInstanceError(ProblemError, ValueError):
    pass


class InvalidSolutionError(ProblemError, ValueError):
    pass


class InvalidMoveError(ProblemError, ValueError):
    pass
