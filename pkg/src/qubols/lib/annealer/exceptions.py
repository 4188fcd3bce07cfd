class AnnealerError(Exception):
    pass


class CapacityExceededError(AnnealerError):
    def __init__(self, n: int, capacity: int) -> None:
        self.n = n
        self.capacity = capacity
        super().__init__(
            f"Model has {n} variables, the annealer accepts at most {capacity}"
        )


class AnnealerConfigError(AnnealerError, ValueError):
    pass
