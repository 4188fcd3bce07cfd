"""Metropolis sampling with replica exchange over a dense QUBO."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from qubols.lib.annealer.config import (
    AnnealerConfig,
    AnnealResult,
    temperature_ladder,
)
from qubols.lib.annealer.exceptions import CapacityExceededError
from qubols.lib.qubo import DimensionError, QuboModel, as_bits, evaluate, quantize

LOG = logging.getLogger(__name__)


@dataclass(eq=False)
class ReplicaState:
    """One configuration with its cached float energy and local fields.

    ``local_field[i]`` is ``sum_j q_ij x_j``; flipping bit ``i`` changes the
    energy by ``(1 - 2 x_i) * (linear[i] + local_field[i])``.
    """

    linear: np.ndarray
    couplings: np.ndarray
    x: np.ndarray
    local_field: np.ndarray
    energy: float
    best_x: np.ndarray = field(init=False)
    best_energy: float = field(init=False)

    def __post_init__(self) -> None:
        self.best_x = self.x.copy()
        self.best_energy = self.energy

    @classmethod
    def from_bits(
        cls,
        linear: np.ndarray,
        couplings: np.ndarray,
        offset: float,
        bits: Sequence[int],
    ) -> ReplicaState:
        x = np.asarray(bits, dtype=np.float64)
        local_field = couplings @ x
        energy = offset + float(linear @ x) + 0.5 * float(x @ local_field)
        return cls(linear, couplings, x, local_field, energy)

    def flip_delta(self, i: int) -> float:
        return (1.0 - 2.0 * self.x[i]) * (self.linear[i] + self.local_field[i])

    def flip(self, i: int, delta: float) -> None:
        sign = 1.0 - 2.0 * self.x[i]
        self.x[i] += sign
        self.local_field += sign * self.couplings[i]
        self.energy += delta
        if self.energy < self.best_energy:
            self.best_energy = self.energy
            self.best_x = self.x.copy()

    @property
    def bits(self) -> Tuple[int, ...]:
        return tuple(int(b) for b in self.x)


def metropolis_sweep(
    state: ReplicaState,
    temperature: float,
    rng: np.random.Generator,
    limit: Optional[int] = None,
) -> ReplicaState:
    """Propose each variable once, in index order, at a fixed temperature.

    ``limit`` truncates the sweep so that step budgets are respected exactly.
    """
    n = len(state.x)
    steps = n if limit is None else min(n, limit)
    uniforms = rng.random(steps)
    for i in range(steps):
        delta = state.flip_delta(i)
        if delta <= 0 or uniforms[i] < math.exp(-delta / temperature):
            state.flip(i, delta)
    return state


def replica_exchange(
    replicas: List[ReplicaState],
    temperatures: Sequence[float],
    rng: np.random.Generator,
) -> List[ReplicaState]:
    """Try to swap configurations of adjacent temperature slots.

    ``replicas[i]`` runs at ``temperatures[i]``; swapping list entries moves
    configurations while the temperatures stay with their slots.
    """
    for i in range(len(replicas) - 1):
        exponent = (1.0 / temperatures[i] - 1.0 / temperatures[i + 1]) * (
            replicas[i].energy - replicas[i + 1].energy
        )
        if exponent >= 0 or rng.random() < math.exp(exponent):
            replicas[i], replicas[i + 1] = replicas[i + 1], replicas[i]
    return replicas


def solve(model: QuboModel, config: AnnealerConfig) -> AnnealResult:
    if model.n > config.capacity:
        raise CapacityExceededError(model.n, config.capacity)
    initial = None if config.initial is None else as_bits(config.initial)
    if initial is not None and len(initial) != model.n:
        raise DimensionError(model.n, len(initial), "initial solution")
    if model.n == 0:
        return AnnealResult((), model.offset, ((0, model.offset),), 0)

    sampled = model
    if config.precision_bits is not None:
        sampled = quantize(model, config.precision_bits)
    linear, couplings = sampled.dense
    offset = float(sampled.offset)
    temperatures = temperature_ladder(sampled, config)

    streams = np.random.SeedSequence(config.seed).spawn(config.num_replicas + 1)
    rngs = [np.random.default_rng(s) for s in streams[:-1]]
    exchange_rng = np.random.default_rng(streams[-1])

    replicas = [
        ReplicaState.from_bits(
            linear,
            couplings,
            offset,
            initial if initial is not None else rng.integers(0, 2, size=model.n),
        )
        for rng in rngs
    ]

    if initial is not None:
        best, threshold = initial, replicas[0].energy
    else:
        start = min(replicas, key=lambda r: r.energy)
        best, threshold = start.bits, start.energy
    best_energy = evaluate(model, best)
    trace: List[Tuple[int, Fraction]] = [(0, best_energy)]

    steps = 0
    rounds = 0
    while steps < config.mc_steps:
        # slot index picks the temperature and the random stream
        for slot, replica in enumerate(replicas):
            budget = config.mc_steps - steps
            if budget <= 0:
                break
            metropolis_sweep(replica, temperatures[slot], rngs[slot], budget)
            steps += min(model.n, budget)
        rounds += 1

        for replica in replicas:
            if replica.best_energy < threshold:
                threshold = replica.best_energy
                candidate = tuple(int(b) for b in replica.best_x)
                energy = evaluate(model, candidate)
                if energy < best_energy:
                    best, best_energy = candidate, energy
                    trace.append((steps, best_energy))

        if rounds % config.exchange_interval == 0:
            replica_exchange(replicas, temperatures, exchange_rng)

    LOG.debug(
        f"Annealed {model.n} variables with {config.num_replicas} replicas, "
        f"{steps} steps, best energy {best_energy}"
    )
    return AnnealResult(best, best_energy, tuple(trace), steps)
