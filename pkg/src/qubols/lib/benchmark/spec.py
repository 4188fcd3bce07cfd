"""Benchmark specification files.

A spec is a JSON document listing instances, method settings and the number
of repetitions. Relative paths are resolved against the directory of the
spec file.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from qubols.lib.annealer import AnnealerConfig
from qubols.lib.benchmark.exceptions import BenchmarkSpecError
from qubols.lib.constants import (
    DEFAULT_CAPACITY,
    DEFAULT_EXCHANGE_INTERVAL,
    DEFAULT_MC_STEPS,
    DEFAULT_NUM_REPLICAS,
    DEFAULT_SA_COOLING,
    InitPolicy,
    Method,
    ProblemKind,
    Rounding,
    SelectionPolicy,
    TspFormat,
)
from qubols.lib.local_search import RunConfig
from qubols.lib.problems import parse_best_known
from qubols.lib.qubo import PenaltyConfig
from qubols.lib.utils import to_fraction

LOG = logging.getLogger(__name__)


class InstanceSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    path: Path
    kind: ProblemKind
    name: Optional[str] = None
    parts: int = Field(default=2, ge=1)
    tsp_format: TspFormat = TspFormat.MATRIX
    rounding: Rounding = Rounding.NONE
    initial: Optional[Path] = None

    @property
    def label(self) -> str:
        return self.name or self.path.stem


class MethodSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    method: Method
    label: Optional[str] = None
    max_iters: Optional[int] = Field(default=None, ge=0)
    k: int = Field(default=2, ge=1)
    m: Optional[int] = Field(default=None, ge=1)
    mc_steps: int = Field(default=DEFAULT_MC_STEPS, ge=0)
    num_replicas: int = Field(default=DEFAULT_NUM_REPLICAS, ge=1)
    temp_min: Optional[float] = Field(default=None, gt=0)
    temp_max: Optional[float] = Field(default=None, gt=0)
    exchange_interval: int = Field(default=DEFAULT_EXCHANGE_INTERVAL, ge=1)
    capacity: int = Field(default=DEFAULT_CAPACITY, ge=1)
    seed_annealer_with_current: bool = False
    selection: Optional[SelectionPolicy] = None
    penalty_scale: float = Field(default=1.0, gt=0)
    sa_cooling: float = Field(default=DEFAULT_SA_COOLING, gt=0, le=1)
    sa_initial_temperature: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_temperatures(self) -> MethodSpec:
        if (self.temp_min is None) != (self.temp_max is None):
            raise ValueError("Set both temp_min and temp_max, or neither")
        if self.temp_min is not None and self.temp_max is not None:
            if self.temp_min > self.temp_max:
                raise ValueError("temp_min must not exceed temp_max")
        return self

    @property
    def series(self) -> str:
        return self.label or self.method.value

    def run_config(self, seed: int, init: InitPolicy = InitPolicy.RANDOM) -> RunConfig:
        return RunConfig(
            method=self.method,
            max_iters=self.max_iters,
            k=self.k,
            m=self.m,
            annealer=AnnealerConfig(
                mc_steps=self.mc_steps,
                num_replicas=self.num_replicas,
                temp_min=self.temp_min,
                temp_max=self.temp_max,
                exchange_interval=self.exchange_interval,
                capacity=self.capacity,
            ),
            seed=seed,
            init=init,
            seed_annealer_with_current=self.seed_annealer_with_current,
            selection=self.selection,
            penalty=PenaltyConfig(scale=Fraction(str(self.penalty_scale))),
            sa_cooling=self.sa_cooling,
            sa_initial_temperature=self.sa_initial_temperature,
        )


class BenchmarkSpec(BaseModel):
    """Run matrix: every method on every instance, ``repetitions`` times.

    Repetition ``r`` uses seed ``seed + r``; all methods of one repetition
    start from the same initial solution.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    instances: List[InstanceSpec] = Field(default_factory=list)
    methods: List[MethodSpec] = Field(default_factory=list)
    repetitions: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    init: InitPolicy = InitPolicy.RANDOM
    best_known: Dict[str, float] = Field(default_factory=dict)
    best_known_file: Optional[Path] = None
    output_dir: Path = Path("results")

    @model_validator(mode="after")
    def _check_labels(self) -> BenchmarkSpec:
        series = [method.series for method in self.methods]
        if len(set(series)) != len(series):
            raise ValueError(f"Method labels must be distinct, got {series}")
        if self.init == InitPolicy.GIVEN:
            missing = [i.label for i in self.instances if i.initial is None]
            if missing:
                raise ValueError(f"init 'given' needs an initial file for {missing}")
        return self

    def repetition_seeds(self) -> List[int]:
        return [self.seed + r for r in range(self.repetitions)]

    def best_known_values(self) -> Dict[str, Fraction]:
        values: Dict[str, Fraction] = {}
        if self.best_known_file is not None:
            values.update(parse_best_known(self.best_known_file.read_text()))
        values.update(
            {name: to_fraction(str(value)) for name, value in self.best_known.items()}
        )
        return values

    def resolved(self, base: Path) -> BenchmarkSpec:
        """Copy with relative paths taken relative to ``base``."""

        def resolve(path: Optional[Path]) -> Optional[Path]:
            if path is None or path.is_absolute():
                return path
            return base / path

        instances = [
            instance.model_copy(
                update={
                    "path": resolve(instance.path),
                    "initial": resolve(instance.initial),
                }
            )
            for instance in self.instances
        ]
        return self.model_copy(
            update={
                "instances": instances,
                "best_known_file": resolve(self.best_known_file),
                "output_dir": resolve(self.output_dir),
            }
        )


def load_benchmark_spec(path: Path) -> BenchmarkSpec:
    path = Path(path)
    try:
        spec = BenchmarkSpec.model_validate_json(path.read_text())
    except OSError as e:
        raise BenchmarkSpecError(f"Cannot read benchmark spec {path}: {e}") from e
    except ValidationError as e:
        raise BenchmarkSpecError(f"Invalid benchmark spec {path}:\n{e}") from e
    LOG.debug(
        f"Loaded {path}: {len(spec.instances)} instances, "
        f"{len(spec.methods)} methods, {spec.repetitions} repetitions"
    )
    return spec.resolved(path.parent)
