class BenchmarkError(Exception):
    pass


class BenchmarkSpecError(BenchmarkError, ValueError):
    pass


class MixedInstancesError(BenchmarkError, ValueError):
    def __init__(self, instances: list) -> None:
        self.instances = instances
        super().__init__(
            f"Plot data needs traces of one instance, got {', '.join(instances)}"
        )
