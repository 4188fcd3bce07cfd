from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional, Tuple

from qubols.lib.annealer import AnnealerConfig
from qubols.lib.constants import (
    DEFAULT_MAX_ITERS,
    DEFAULT_SA_COOLING,
    DEFAULT_SA_ITERATIONS,
    InitPolicy,
    Method,
    SelectionPolicy,
)
from qubols.lib.local_search.exceptions import RunConfigError
from qubols.lib.qubo import PenaltyConfig

_SEED_LIMIT = 2**64


@dataclass(frozen=True)
class RunConfig:
    """One local search run.

    ``max_iters`` counts outer iterations for the QUBO methods and moves for
    simulated annealing; unset, it falls back to the budget of the method.
    ``m`` caps the number of local changes per sub-QUBO; unset, the problem
    fills the annealer capacity. ``k`` is the subset size of C-QUBO-LS. QLS
    derives both from the capacity. ``selection`` unset uses the policy of
    the problem.
    """

    method: Method = Method.UQUBOLS
    max_iters: Optional[int] = None
    k: int = 2
    m: Optional[int] = None
    annealer: AnnealerConfig = field(default_factory=AnnealerConfig)
    seed: int = 0
    init: InitPolicy = InitPolicy.RANDOM
    initial: Optional[Tuple[int, ...]] = None
    seed_annealer_with_current: bool = False
    selection: Optional[SelectionPolicy] = None
    penalty: PenaltyConfig = field(default_factory=PenaltyConfig)
    sa_cooling: float = DEFAULT_SA_COOLING
    sa_initial_temperature: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "init", InitPolicy(self.init))
        if self.selection is not None:
            object.__setattr__(self, "selection", SelectionPolicy(self.selection))
        if self.initial is not None:
            object.__setattr__(self, "initial", tuple(int(v) for v in self.initial))
        if self.max_iters is not None and self.max_iters < 0:
            raise RunConfigError(f"max_iters must be >= 0, got {self.max_iters}")
        if self.k < 1:
            raise RunConfigError(f"k must be >= 1, got {self.k}")
        if self.m is not None and self.m < 1:
            raise RunConfigError(f"m must be >= 1, got {self.m}")
        if not 0 <= self.seed < _SEED_LIMIT:
            raise RunConfigError(f"seed must fit in 64 bits, got {self.seed}")
        if self.init == InitPolicy.GIVEN and self.initial is None:
            raise RunConfigError("Initial policy 'given' needs an initial solution")
        if self.method == Method.CQUBOLS and self.k < 2:
            raise RunConfigError(f"C-QUBO-LS needs k >= 2, got {self.k}")
        if not 0 < self.sa_cooling <= 1:
            raise RunConfigError(f"sa_cooling must be in (0, 1], got {self.sa_cooling}")
        if self.sa_initial_temperature is not None and self.sa_initial_temperature < 0:
            raise RunConfigError(
                "sa_initial_temperature must be >= 0, "
                f"got {self.sa_initial_temperature}"
            )

    def budget(self, sa_iterations: int = DEFAULT_SA_ITERATIONS) -> int:
        """Outer iterations, or moves for simulated annealing."""
        if self.max_iters is not None:
            return self.max_iters
        if self.method == Method.SA:
            return sa_iterations
        return DEFAULT_MAX_ITERS

    def with_initial(self, initial: Tuple[int, ...]) -> RunConfig:
        """Start from ``initial`` regardless of the configured policy."""
        return dataclasses.replace(self, init=InitPolicy.GIVEN, initial=initial)

    def with_method(self, method: Method) -> RunConfig:
        return dataclasses.replace(self, method=method)
