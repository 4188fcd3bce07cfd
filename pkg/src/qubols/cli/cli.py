import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table
from typing_extensions import Annotated

from qubols import __version__
from qubols.lib.benchmark import (
    BenchmarkResult,
    BenchmarkSpec,
    BenchmarkSpecError,
    InstanceSpec,
    MethodSpec,
    load_benchmark_spec,
    run_benchmark,
)
from qubols.lib.config_file import get_config_int, get_config_value
from qubols.lib.constants import (
    DEFAULT_CAPACITY,
    DEFAULT_EXCHANGE_INTERVAL,
    DEFAULT_MC_STEPS,
    DEFAULT_NUM_REPLICAS,
    InitPolicy,
    Method,
    ProblemKind,
    Rounding,
    SelectionPolicy,
    TspFormat,
)
from qubols.lib.env_config import get_env_seed, is_verbose_env_vars
from qubols.lib.logger import configure_logging, set_not_verbose
from qubols.lib.utils import format_number, system_run

LOG = logging.getLogger(__name__)

ANNEALER_PANEL = "Annealer"
OUTPUT_PANEL = "Output"


def version_callback(value: bool) -> None:
    if value:
        typer.echo(f"qubols: {__version__}")
        raise typer.Exit()


def parse_init(value: str) -> Tuple[InitPolicy, Optional[Path]]:
    """``random``, ``spectral`` or ``given:<file>``."""
    if value.startswith("given:"):
        path = Path(value[len("given:") :])
        if not path.is_file():
            raise typer.BadParameter(f"Initial solution file not found: {path}")
        return InitPolicy.GIVEN, path
    try:
        policy = InitPolicy(value)
    except ValueError:
        raise typer.BadParameter(
            f"Expected random, spectral or given:<file>, got {value!r}"
        ) from None
    if policy == InitPolicy.GIVEN:
        raise typer.BadParameter("Use given:<file> to pass an initial solution")
    return policy, None


def env_seed() -> Optional[int]:
    try:
        return get_env_seed()
    except ValueError as e:
        raise typer.BadParameter(str(e)) from e


def resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    fallback = env_seed()
    return 0 if fallback is None else fallback


def method_specs(
    methods: Optional[List[Method]],
    iters: Optional[int],
    k: Optional[int],
    m: Optional[int],
    mc_steps: Optional[int],
    replicas: Optional[int],
    capacity: Optional[int],
    selection: Optional[SelectionPolicy],
    seed_annealer: bool,
) -> List[MethodSpec]:
    """Method settings from the flags, falling back to the config file."""
    if mc_steps is None:
        mc_steps = get_config_value("ANNEALER", "mc_steps", DEFAULT_MC_STEPS)
    if replicas is None:
        replicas = get_config_value("ANNEALER", "replicas", DEFAULT_NUM_REPLICAS)
    if capacity is None:
        capacity = get_config_value("ANNEALER", "capacity", DEFAULT_CAPACITY)
    if k is None:
        k = get_config_value("RUN", "k", 2)
    if m is None:
        m = get_config_int("RUN", "m")
    specs = []
    for method in methods or [Method.UQUBOLS]:
        max_iters = iters
        if max_iters is None:
            key = "sa_iters" if method == Method.SA else "iters"
            max_iters = get_config_int("RUN", key)
        try:
            specs.append(
                MethodSpec(
                    method=method,
                    max_iters=max_iters,
                    k=k,
                    m=m,
                    mc_steps=mc_steps,
                    num_replicas=replicas,
                    temp_min=get_config_value("ANNEALER", "temp_min", None),
                    temp_max=get_config_value("ANNEALER", "temp_max", None),
                    exchange_interval=get_config_value(
                        "ANNEALER", "exchange_interval", DEFAULT_EXCHANGE_INTERVAL
                    ),
                    capacity=capacity,
                    seed_annealer_with_current=seed_annealer,
                    selection=selection,
                )
            )
        except ValidationError as e:
            raise typer.BadParameter(str(e)) from e
    return specs


def _number(value: Optional[Fraction]) -> str:
    return "" if value is None else format_number(value)


def print_summary(result: BenchmarkResult) -> None:
    console = Console()
    with_ratio = any(row.ratio is not None for row in result.rows)
    headers = ["Instance", "Method", "Seed", "Status", "Initial", "Final", "Iters"]
    if with_ratio:
        headers.append("Ratio")
    headers.append("Time (s)")
    table = Table(*headers, show_header=True)
    for row in result.rows:
        cells = [
            row.instance,
            row.method,
            "" if row.seed is None else str(row.seed),
            row.status if row.ok else f"[red]{escape(row.message)}[/red]",
            _number(row.initial_objective),
            _number(row.final_objective),
            str(row.iterations),
        ]
        if with_ratio:
            cells.append("" if row.ratio is None else f"{float(row.ratio):.4f}")
        cells.append(f"{row.wall_time:.2f}")
        table.add_row(*cells)
    console.print(table)
    console.print(f"Results written to {escape(str(result.output_dir))}")


def execute(spec: BenchmarkSpec) -> None:
    with system_run():
        result = run_benchmark(spec)
    print_summary(result)
    raise typer.Exit(code=result.exit_code)


InstanceArgument = Annotated[
    Path, typer.Argument(help="Instance file", exists=True, dir_okay=False)
]
MethodOption = Annotated[
    Optional[List[Method]],
    typer.Option("--method", help="Method to run, repeat to compare several"),
]
ItersOption = Annotated[
    Optional[int],
    typer.Option(
        "--iters", min=0, help="Outer iterations, or moves for simulated annealing"
    ),
]
KOption = Annotated[
    Optional[int], typer.Option("--k", min=1, help="Subset size of C-QUBO-LS")
]
MOption = Annotated[
    Optional[int],
    typer.Option("--m", min=1, help="Local changes per sub-QUBO; unset fills capacity"),
]
McStepsOption = Annotated[
    Optional[int],
    typer.Option(
        "--mc-steps",
        min=0,
        help="MC steps per sub-QUBO",
        rich_help_panel=ANNEALER_PANEL,
    ),
]
ReplicasOption = Annotated[
    Optional[int],
    typer.Option(
        "--replicas",
        min=1,
        help="Parallel tempering replicas",
        rich_help_panel=ANNEALER_PANEL,
    ),
]
CapacityOption = Annotated[
    Optional[int],
    typer.Option(
        "--capacity",
        min=1,
        help=f"Annealer variable capacity [default: {DEFAULT_CAPACITY}]",
        rich_help_panel=ANNEALER_PANEL,
    ),
]
SeedAnnealerOption = Annotated[
    bool,
    typer.Option(
        "--seed-annealer",
        help="Start the annealer from the current solution",
        rich_help_panel=ANNEALER_PANEL,
    ),
]
SelectionOption = Annotated[
    Optional[SelectionPolicy],
    typer.Option(
        "--selection",
        help="Sub-QUBO selection policy; greedy by default, random for tours",
    ),
]
SeedOption = Annotated[
    Optional[int],
    typer.Option("--seed", min=0, help="Base seed; falls back to QUBOLS_SEED"),
]
InitOption = Annotated[
    str, typer.Option("--init", help="random, spectral or given:<file>")
]
RepetitionsOption = Annotated[
    int, typer.Option("--repetitions", min=1, help="Runs per method, seeds seed+r")
]
BestKnownOption = Annotated[
    Optional[Path],
    typer.Option(
        "--best-known",
        exists=True,
        dir_okay=False,
        help="File of 'instance value' lines",
        rich_help_panel=OUTPUT_PANEL,
    ),
]
OutOption = Annotated[
    Path, typer.Option("--out", help="Output directory", rich_help_panel=OUTPUT_PANEL)
]


def run_single(
    kind: ProblemKind,
    instance: Path,
    methods: Optional[List[Method]],
    iters: Optional[int],
    k: Optional[int],
    m: Optional[int],
    mc_steps: Optional[int],
    replicas: Optional[int],
    capacity: Optional[int],
    seed_annealer: bool,
    selection: Optional[SelectionPolicy],
    seed: Optional[int],
    init: str,
    repetitions: int,
    best_known: Optional[Path],
    out: Path,
    parts: int = 2,
    tsp_format: TspFormat = TspFormat.MATRIX,
    rounding: Rounding = Rounding.NONE,
) -> None:
    policy, initial = parse_init(init)
    specs = method_specs(
        methods, iters, k, m, mc_steps, replicas, capacity, selection, seed_annealer
    )
    try:
        spec = BenchmarkSpec(
            instances=[
                InstanceSpec(
                    path=instance,
                    kind=kind,
                    parts=parts,
                    tsp_format=tsp_format,
                    rounding=rounding,
                    initial=initial,
                )
            ],
            methods=specs,
            repetitions=repetitions,
            seed=resolve_seed(seed),
            init=policy,
            best_known_file=best_known,
            output_dir=out,
        )
    except ValidationError as e:
        raise typer.BadParameter(str(e)) from e
    execute(spec)


app = typer.Typer()


@app.callback()
def default(
    version: Annotated[
        Optional[bool],
        typer.Option(
            "--version",
            callback=version_callback,
            is_eager=True,
            help="Show application version",
        ),
    ] = None,
    verbose: Annotated[
        bool, typer.Option("--verbose", "-v", help="Increase logging verbosity")
    ] = False,
) -> None:
    """QUBO local search for permutation and partition problems."""
    if (not verbose) and (not is_verbose_env_vars()):
        set_not_verbose()


@app.command()
def run_qap(
    instance: InstanceArgument,
    method: MethodOption = None,
    iters: ItersOption = None,
    k: KOption = None,
    m: MOption = None,
    mc_steps: McStepsOption = None,
    replicas: ReplicasOption = None,
    capacity: CapacityOption = None,
    seed_annealer: SeedAnnealerOption = False,
    selection: SelectionOption = None,
    seed: SeedOption = None,
    init: InitOption = InitPolicy.RANDOM.value,
    repetitions: RepetitionsOption = 1,
    best_known: BestKnownOption = None,
    out: OutOption = Path("results"),
) -> None:
    """Quadratic assignment instance in QAPLIB format."""
    run_single(
        ProblemKind.QAP,
        instance,
        method,
        iters,
        k,
        m,
        mc_steps,
        replicas,
        capacity,
        seed_annealer,
        selection,
        seed,
        init,
        repetitions,
        best_known,
        out,
    )


@app.command()
def run_m2sp(
    instance: InstanceArgument,
    method: MethodOption = None,
    iters: ItersOption = None,
    k: KOption = None,
    m: MOption = None,
    mc_steps: McStepsOption = None,
    replicas: ReplicasOption = None,
    capacity: CapacityOption = None,
    seed_annealer: SeedAnnealerOption = False,
    selection: SelectionOption = None,
    seed: SeedOption = None,
    init: InitOption = InitPolicy.RANDOM.value,
    repetitions: RepetitionsOption = 1,
    best_known: BestKnownOption = None,
    out: OutOption = Path("results"),
) -> None:
    """Minimum 2-sum ordering of an edge list or DIMACS graph."""
    run_single(
        ProblemKind.M2SP,
        instance,
        method,
        iters,
        k,
        m,
        mc_steps,
        replicas,
        capacity,
        seed_annealer,
        selection,
        seed,
        init,
        repetitions,
        best_known,
        out,
    )


@app.command()
def run_tsp(
    instance: InstanceArgument,
    method: MethodOption = None,
    iters: ItersOption = None,
    m: Annotated[
        Optional[int], typer.Option("--m", min=2, help="Segments per k-reversal QUBO")
    ] = None,
    mc_steps: McStepsOption = None,
    replicas: ReplicasOption = None,
    capacity: CapacityOption = None,
    seed_annealer: SeedAnnealerOption = False,
    selection: SelectionOption = None,
    seed: SeedOption = None,
    init: InitOption = InitPolicy.RANDOM.value,
    repetitions: RepetitionsOption = 1,
    best_known: BestKnownOption = None,
    out: OutOption = Path("results"),
    coordinates: Annotated[
        bool, typer.Option("--coordinates", help="Instance lists 'x y' per city")
    ] = False,
    rounding: Annotated[
        Rounding, typer.Option("--rounding", help="Rounding of Euclidean distances")
    ] = Rounding.NONE,
) -> None:
    """Travelling salesman instance, distance matrix or coordinates."""
    run_single(
        ProblemKind.TSP,
        instance,
        method,
        iters,
        None,
        m,
        mc_steps,
        replicas,
        capacity,
        seed_annealer,
        selection,
        seed,
        init,
        repetitions,
        best_known,
        out,
        tsp_format=TspFormat.COORDINATES if coordinates else TspFormat.MATRIX,
        rounding=rounding,
    )


@app.command()
def run_gp(
    instance: InstanceArgument,
    method: MethodOption = None,
    iters: ItersOption = None,
    m: MOption = None,
    mc_steps: McStepsOption = None,
    replicas: ReplicasOption = None,
    capacity: CapacityOption = None,
    seed_annealer: SeedAnnealerOption = False,
    selection: SelectionOption = None,
    seed: SeedOption = None,
    init: InitOption = InitPolicy.RANDOM.value,
    repetitions: RepetitionsOption = 1,
    best_known: BestKnownOption = None,
    out: OutOption = Path("results"),
    parts: Annotated[
        int, typer.Option("--parts", min=1, help="Number of equal parts")
    ] = 2,
) -> None:
    """Balanced graph partitioning of an edge list or DIMACS graph."""
    run_single(
        ProblemKind.GP,
        instance,
        method,
        iters,
        None,
        m,
        mc_steps,
        replicas,
        capacity,
        seed_annealer,
        selection,
        seed,
        init,
        repetitions,
        best_known,
        out,
        parts=parts,
    )


@app.command()
def bench(
    spec_file: Annotated[
        Path, typer.Argument(help="Benchmark spec (JSON)", exists=True, dir_okay=False)
    ],
    seed: Annotated[
        Optional[int], typer.Option("--seed", min=0, help="Override the base seed")
    ] = None,
    best_known: BestKnownOption = None,
    out: Annotated[
        Optional[Path],
        typer.Option(
            "--out", help="Override the output directory", rich_help_panel=OUTPUT_PANEL
        ),
    ] = None,
) -> None:
    """Run every method of a benchmark spec on every instance."""
    try:
        spec = load_benchmark_spec(spec_file)
    except BenchmarkSpecError as e:
        raise typer.BadParameter(str(e)) from e
    updates: Dict[str, Any] = {}
    if seed is None and "seed" not in spec.model_fields_set:
        seed = env_seed()
    if seed is not None:
        updates["seed"] = seed
    if best_known is not None:
        updates["best_known_file"] = best_known
    if out is not None:
        updates["output_dir"] = out
    execute(spec.model_copy(update=updates))


def main() -> None:
    configure_logging()
    app()


if __name__ == "__main__":
    main()
