class QuboError(Exception):
    pass


class DimensionError(QuboError, ValueError):
    def __init__(self, expected: int, actual: int, what: str = "assignment"):
        msg = f"{what} has length {actual}, expected {expected}"
        super().__init__(msg)


class VariableIndexError(QuboError, IndexError):
    def __init__(self, index: int, n: int):
        msg = f"Variable index {index} out of range for {n} variables"
        super().__init__(msg)


class FormulationError(QuboError):
    pass
