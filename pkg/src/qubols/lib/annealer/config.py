from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from qubols.lib.annealer.exceptions import AnnealerConfigError
from qubols.lib.constants import (
    DEFAULT_CAPACITY,
    DEFAULT_EXCHANGE_INTERVAL,
    DEFAULT_MC_STEPS,
    DEFAULT_NUM_REPLICAS,
)
from qubols.lib.qubo import BitString, QuboModel, flip_bound

_SEED_LIMIT = 2**64


@dataclass(frozen=True)
class AnnealerConfig:
    """Settings of the parallel tempering annealer.

    ``mc_steps`` counts single-flip attempts summed over all replicas.
    ``exchange_interval`` is measured in sweeps: replica exchange is attempted
    after every ``exchange_interval`` rounds in which each replica performed
    one sweep. Leaving both temperatures unset derives the ladder from the
    model (see :func:`temperature_ladder`).
    """

    mc_steps: int = DEFAULT_MC_STEPS
    num_replicas: int = DEFAULT_NUM_REPLICAS
    temp_min: Optional[float] = None
    temp_max: Optional[float] = None
    exchange_interval: int = DEFAULT_EXCHANGE_INTERVAL
    seed: int = 0
    capacity: int = DEFAULT_CAPACITY
    initial: Optional[BitString] = None
    precision_bits: Optional[int] = None

    def __post_init__(self) -> None:
        if self.mc_steps < 0:
            raise AnnealerConfigError(f"mc_steps must be >= 0, got {self.mc_steps}")
        if self.num_replicas < 1:
            raise AnnealerConfigError(
                f"num_replicas must be >= 1, got {self.num_replicas}"
            )
        if self.exchange_interval < 1:
            raise AnnealerConfigError(
                f"exchange_interval must be >= 1, got {self.exchange_interval}"
            )
        if self.capacity < 1:
            raise AnnealerConfigError(f"capacity must be >= 1, got {self.capacity}")
        if not 0 <= self.seed < _SEED_LIMIT:
            raise AnnealerConfigError(f"seed must fit in 64 bits, got {self.seed}")
        if (self.temp_min is None) != (self.temp_max is None):
            raise AnnealerConfigError("Set both temp_min and temp_max, or neither")
        if self.temp_min is not None and self.temp_max is not None:
            if not 0 < self.temp_min <= self.temp_max:
                raise AnnealerConfigError(
                    "Temperature ladder needs 0 < temp_min <= temp_max, "
                    f"got {self.temp_min}, {self.temp_max}"
                )
            if not np.isfinite(self.temp_max):
                raise AnnealerConfigError("temp_max must be finite")
        if self.precision_bits is not None and self.precision_bits < 2:
            raise AnnealerConfigError(
                f"precision_bits must be >= 2, got {self.precision_bits}"
            )

    def with_seed(self, seed: int) -> AnnealerConfig:
        return dataclasses.replace(self, seed=seed)

    def with_initial(self, initial: Optional[BitString]) -> AnnealerConfig:
        return dataclasses.replace(
            self, initial=None if initial is None else tuple(initial)
        )


@dataclass(frozen=True)
class AnnealResult:
    best: BitString
    best_energy: Fraction
    energy_trace: Tuple[Tuple[int, Fraction], ...]
    steps_used: int


def temperature_ladder(model: QuboModel, config: AnnealerConfig) -> np.ndarray:
    """Geometric temperatures, coldest first.

    Without explicit bounds the hottest replica sits at half the largest
    possible flip delta and the coldest at a thousandth of it.
    """
    if config.temp_min is not None and config.temp_max is not None:
        low, high = config.temp_min, config.temp_max
    else:
        bound = float(flip_bound(model))
        if bound == 0:
            bound = 1.0
        low, high = bound / 1000, bound / 2
    if config.num_replicas == 1:
        return np.array([low])
    return np.geomspace(low, high, config.num_replicas)
