from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

from qubols.lib.constants import Method
from qubols.lib.outputs import atomic_write_text


@dataclass(frozen=True)
class IterationRecord:
    """State after one outer iteration; iteration 0 is the initial solution.

    ``objective`` is the incumbent after the iteration. The energies are the
    sub-QUBO energies of the annealer output and of the incumbent encoding.
    """

    iteration: int
    objective: Fraction
    qubo_size: int = 0
    annealer_steps: int = 0
    accepted: bool = False
    wall_time: float = field(default=0.0, compare=False)
    candidate_objective: Optional[Fraction] = None
    feasible: bool = True
    candidate_energy: Optional[Fraction] = None
    incumbent_energy: Optional[Fraction] = None

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "iteration": self.iteration,
            "objective": json_number(self.objective),
            "qubo_size": self.qubo_size,
            "annealer_steps": self.annealer_steps,
            "accepted": self.accepted,
            "wall_time": round(self.wall_time, 6),
            "candidate_objective": json_number(self.candidate_objective),
            "feasible": self.feasible,
            "candidate_energy": json_number(self.candidate_energy),
            "incumbent_energy": json_number(self.incumbent_energy),
        }


@dataclass(frozen=True)
class RunTrace:
    instance: str
    method: Method
    seed: int
    records: Tuple[IterationRecord, ...]
    initial_solution: Tuple[int, ...]
    final_solution: Tuple[int, ...]

    @property
    def initial_objective(self) -> Fraction:
        return self.records[0].objective

    @property
    def final_objective(self) -> Fraction:
        return self.records[-1].objective

    @property
    def iterations(self) -> int:
        return len(self.records) - 1

    @property
    def wall_time(self) -> float:
        return sum(record.wall_time for record in self.records)

    @property
    def accepted_objectives(self) -> List[Fraction]:
        return [record.objective for record in self.records if record.accepted]

    def infeasible_rate(self) -> float:
        """Share of annealer outputs that did not decode to a solution."""
        solved = [record for record in self.records[1:] if record.qubo_size]
        if not solved:
            return 0.0
        return sum(not record.feasible for record in solved) / len(solved)


def json_number(value: Optional[Fraction]) -> Union[int, float, None]:
    if value is None:
        return None
    if value.denominator == 1:
        return value.numerator
    return float(value)


def trace_lines(trace: RunTrace) -> Iterator[str]:
    for record in trace.records:
        payload = {
            "instance": trace.instance,
            "method": trace.method.value,
            "seed": trace.seed,
            **record.to_json_dict(),
        }
        yield json.dumps(payload)


def write_trace(trace: RunTrace, path: Path) -> Path:
    """Write one JSON object per iteration."""
    text = "".join(f"{line}\n" for line in trace_lines(trace))
    return atomic_write_text(path, text)
