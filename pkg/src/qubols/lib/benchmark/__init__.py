from qubols.lib.benchmark.exceptions import (
    BenchmarkError,
    BenchmarkSpecError,
    MixedInstancesError,
)
from qubols.lib.benchmark.instances import (
    load_problem,
    parse_initial_solution,
    problem_from_text,
    read_initial_solution,
)
from qubols.lib.benchmark.runner import (
    BenchmarkResult,
    SummaryRow,
    approximation_ratio,
    emit_plot_data,
    run_benchmark,
    summary_csv,
)
from qubols.lib.benchmark.spec import (
    BenchmarkSpec,
    InstanceSpec,
    MethodSpec,
    load_benchmark_spec,
)

__all__ = [
    "BenchmarkError",
    "BenchmarkResult",
    "BenchmarkSpec",
    "BenchmarkSpecError",
    "InstanceSpec",
    "MethodSpec",
    "MixedInstancesError",
    "SummaryRow",
    "approximation_ratio",
    "emit_plot_data",
    "load_benchmark_spec",
    "load_problem",
    "parse_initial_solution",
    "problem_from_text",
    "read_initial_solution",
    "run_benchmark",
    "summary_csv",
]
