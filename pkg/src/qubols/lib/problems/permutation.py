from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import numpy as np

from qubols.lib.problems.exceptions import InvalidSolutionError


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{0..n-1}``; ``image[i]`` is where ``i`` is sent."""

    image: Tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(int(v) for v in self.image)
        if sorted(image) != list(range(len(image))):
            raise InvalidSolutionError(f"Not a permutation: {list(image)}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> Permutation:
        return cls(tuple(int(v) for v in rng.permutation(n)))

    @classmethod
    def from_positions(cls, ranking: Sequence[int]) -> Permutation:
        """Permutation sending ``ranking[r]`` to ``r``."""
        image = [0] * len(ranking)
        for position, item in enumerate(ranking):
            image[item] = position
        return cls(tuple(image))

    @property
    def n(self) -> int:
        return len(self.image)

    def __len__(self) -> int:
        return len(self.image)

    def __getitem__(self, i: int) -> int:
        return self.image[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.image)

    def swapped(self, a: int, b: int) -> Permutation:
        image = list(self.image)
        image[a], image[b] = image[b], image[a]
        return Permutation(tuple(image))

    def inverse(self) -> Permutation:
        return Permutation.from_positions(self.image)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.intp)
