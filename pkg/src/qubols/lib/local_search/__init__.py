from qubols.lib.local_search.adapters import (
    M2spProblem,
    PartitionProblem,
    QapProblem,
    TspProblem,
)
from qubols.lib.local_search.config import RunConfig
from qubols.lib.local_search.driver import (
    initial_solution,
    initial_temperature,
    moves_per_temperature,
    qubo_local_search,
    run,
    run_cqubols,
    run_qls,
    run_sa_baseline,
    run_uqubols,
    subset_count,
)
from qubols.lib.local_search.exceptions import (
    LocalSearchError,
    RunConfigError,
    UnsupportedMethodError,
)
from qubols.lib.local_search.problem import LocalSearchProblem, SubQubo
from qubols.lib.local_search.trace import (
    IterationRecord,
    RunTrace,
    trace_lines,
    write_trace,
)

__all__ = [
    "IterationRecord",
    "LocalSearchError",
    "LocalSearchProblem",
    "M2spProblem",
    "PartitionProblem",
    "QapProblem",
    "RunConfig",
    "RunConfigError",
    "RunTrace",
    "SubQubo",
    "TspProblem",
    "UnsupportedMethodError",
    "initial_solution",
    "initial_temperature",
    "moves_per_temperature",
    "qubo_local_search",
    "run",
    "run_cqubols",
    "run_qls",
    "run_sa_baseline",
    "run_uqubols",
    "subset_count",
    "trace_lines",
    "write_trace",
]
