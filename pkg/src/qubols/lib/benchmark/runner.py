from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from qubols.lib.annealer import Solver
from qubols.lib.benchmark.exceptions import MixedInstancesError
from qubols.lib.benchmark.instances import load_problem, read_initial_solution
from qubols.lib.benchmark.spec import BenchmarkSpec, InstanceSpec
from qubols.lib.constants import METADATA_FILE_NAME, SUMMARY_FILE_NAME
from qubols.lib.local_search import (
    LocalSearchError,
    RunConfig,
    RunTrace,
    initial_solution,
    run,
    write_trace,
)
from qubols.lib.outputs import atomic_write_text, csv_text, write_json
from qubols.lib.problems import ProblemError
from qubols.lib.utils import format_number
from qubols.metadata import __version__

LOG = logging.getLogger(__name__)

SUMMARY_HEADER = (
    "instance",
    "method",
    "seed",
    "status",
    "initial_objective",
    "final_objective",
    "iterations",
)


def approximation_ratio(
    objective: Fraction, best_known: Optional[Fraction]
) -> Optional[Fraction]:
    """``objective / best_known``; undefined unless ``best_known > 0``."""
    if best_known is None or best_known <= 0:
        return None
    return Fraction(objective) / best_known


def _format_ratio(ratio: Optional[Fraction]) -> str:
    return "" if ratio is None else f"{float(ratio):.6f}"


def _format_number(value: Optional[Fraction]) -> str:
    return "" if value is None else format_number(value)


def safe_file_part(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", text).strip("_") or "unnamed"


@dataclass(frozen=True)
class SummaryRow:
    instance: str
    method: str = ""
    seed: Optional[int] = None
    status: str = "ok"
    initial_objective: Optional[Fraction] = None
    final_objective: Optional[Fraction] = None
    iterations: int = 0
    ratio: Optional[Fraction] = None
    wall_time: float = field(default=0.0, compare=False)
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @classmethod
    def from_trace(
        cls, trace: RunTrace, label: str, best_known: Optional[Fraction] = None
    ) -> SummaryRow:
        return cls(
            instance=trace.instance,
            method=label,
            seed=trace.seed,
            initial_objective=trace.initial_objective,
            final_objective=trace.final_objective,
            iterations=trace.iterations,
            ratio=approximation_ratio(trace.final_objective, best_known),
            wall_time=trace.wall_time,
        )

    @classmethod
    def failed(
        cls,
        instance: str,
        error: Exception,
        method: str = "",
        seed: Optional[int] = None,
    ) -> SummaryRow:
        return cls(instance, method, seed, status="error", message=str(error))

    def csv_row(self, with_ratio: bool) -> List[str]:
        row = [
            self.instance,
            self.method,
            "" if self.seed is None else str(self.seed),
            self.status if self.ok else f"error: {self.message}",
            _format_number(self.initial_objective),
            _format_number(self.final_objective),
            str(self.iterations),
        ]
        if with_ratio:
            row.append(_format_ratio(self.ratio))
        return row


def summary_header(with_ratio: bool) -> Tuple[str, ...]:
    return SUMMARY_HEADER + (("ratio",) if with_ratio else ())


def summary_csv(rows: Sequence[SummaryRow], with_ratio: bool = False) -> str:
    return csv_text(summary_header(with_ratio), (r.csv_row(with_ratio) for r in rows))


def emit_plot_data(
    traces: Sequence[RunTrace],
    best_known: Optional[Fraction] = None,
    labels: Optional[Sequence[str]] = None,
) -> str:
    """Long-format CSV with one row per trace record.

    Every trace must come from the same instance. The ratio column is only
    present when ``best_known`` is given.
    """
    instances = sorted({trace.instance for trace in traces})
    if len(instances) > 1:
        raise MixedInstancesError(instances)
    if labels is None:
        labels = [f"{trace.method.value}/{trace.seed}" for trace in traces]
    with_ratio = best_known is not None
    header = ["series", "method", "seed", "iteration", "objective"]
    if with_ratio:
        header.append("ratio")
    rows = []
    for label, trace in zip(labels, traces):
        for record in trace.records:
            row = [
                label,
                trace.method.value,
                str(trace.seed),
                str(record.iteration),
                _format_number(record.objective),
            ]
            if with_ratio:
                row.append(
                    _format_ratio(approximation_ratio(record.objective, best_known))
                )
            rows.append(row)
    return csv_text(header, rows)


@dataclass
class BenchmarkResult:
    rows: List[SummaryRow]
    output_dir: Path
    files: List[Path] = field(default_factory=list)

    @property
    def instances_failed(self) -> bool:
        """True when there were instances and none produced a result."""
        instances = {row.instance for row in self.rows}
        succeeded = {row.instance for row in self.rows if row.ok}
        return bool(instances) and not succeeded

    @property
    def exit_code(self) -> int:
        return 1 if self.instances_failed else 0


def _shared_initial(
    instance: InstanceSpec, spec: BenchmarkSpec, problem: Any, seed: int
) -> Tuple[int, ...]:
    given = None
    if instance.initial is not None:
        given = read_initial_solution(instance.initial)
    cfg = RunConfig(seed=seed, init=spec.init, initial=given)
    return problem.solution_to_list(initial_solution(problem, cfg))


def _run_instance(
    instance: InstanceSpec,
    spec: BenchmarkSpec,
    best_known: Mapping[str, Fraction],
    solver: Optional[Solver],
    result: BenchmarkResult,
) -> List[Dict[str, Any]]:
    name = instance.label
    problem = load_problem(
        instance.kind,
        instance.path,
        name,
        instance.parts,
        instance.tsp_format,
        instance.rounding,
    )
    best = best_known.get(name)
    traces: List[RunTrace] = []
    labels: List[str] = []
    runs: List[Dict[str, Any]] = []
    for seed in spec.repetition_seeds():
        start = _shared_initial(instance, spec, problem, seed)
        for method in spec.methods:
            label = method.series
            try:
                cfg = method.run_config(seed).with_initial(start)
                trace = run(problem, cfg, solver)
            except LocalSearchError as e:
                LOG.error(f"{name}: {label} with seed {seed} failed: {e}")
                result.rows.append(SummaryRow.failed(name, e, label, seed))
                continue
            path = result.output_dir / (
                f"trace-{safe_file_part(name)}-{safe_file_part(label)}-{seed}.jsonl"
            )
            result.files.append(write_trace(trace, path))
            result.rows.append(SummaryRow.from_trace(trace, label, best))
            traces.append(trace)
            labels.append(f"{label}/{seed}")
            runs.append(
                {
                    "instance": name,
                    "method": label,
                    "seed": seed,
                    "wall_time": round(trace.wall_time, 6),
                }
            )
            LOG.info(
                f"{name}: {label} seed {seed}: "
                f"{trace.initial_objective} -> {trace.final_objective}"
            )
    if traces:
        plot = emit_plot_data(traces, best, labels)
        path = result.output_dir / f"plot-{safe_file_part(name)}.csv"
        result.files.append(atomic_write_text(path, plot))
    return runs


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def run_benchmark(
    spec: BenchmarkSpec, solver: Optional[Solver] = None
) -> BenchmarkResult:
    """Run every method on every instance and write the result files.

    ``summary.csv`` and the plot files only depend on the spec; timestamps
    and wall times go to ``metadata.json`` and the traces.
    """
    started = _timestamp()
    best_known = spec.best_known_values()
    result = BenchmarkResult(rows=[], output_dir=Path(spec.output_dir))
    runs: List[Dict[str, Any]] = []
    for instance in spec.instances:
        try:
            runs.extend(_run_instance(instance, spec, best_known, solver, result))
        except (OSError, ProblemError, LocalSearchError) as e:
            LOG.error(f"Instance {instance.label} failed: {e}")
            result.rows.append(SummaryRow.failed(instance.label, e))
    with_ratio = bool(best_known)
    summary = atomic_write_text(
        result.output_dir / SUMMARY_FILE_NAME, summary_csv(result.rows, with_ratio)
    )
    metadata = write_json(
        result.output_dir / METADATA_FILE_NAME,
        {
            "version": __version__,
            "started": started,
            "finished": _timestamp(),
            "runs": runs,
        },
    )
    result.files.extend([summary, metadata])
    return result
