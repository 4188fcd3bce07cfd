class LocalSearchError(Exception):
    pass


class RunConfigError(LocalSearchError, ValueError):
    pass


class UnsupportedMethodError(LocalSearchError, ValueError):
    def __init__(self, problem: str, feature: str) -> None:
        self.problem = problem
        self.feature = feature
        super().__init__(f"Problem '{problem}' does not support {feature}")
