import os
from typing import Optional


def is_env_var_true(env_var: str) -> bool:
    val = os.getenv(env_var)
    return val is not None and val.lower() in ("1", "true")


def is_verbose_env_vars() -> bool:
    return is_env_var_true("QUBOLS_VERBOSE")


def get_env_seed() -> Optional[int]:
    """Base seed from ``QUBOLS_SEED``, if set to an integer."""
    val = os.getenv("QUBOLS_SEED")
    if val is None or not val.strip():
        return None
    try:
        return int(val)
    except ValueError as e:
        raise ValueError(f"QUBOLS_SEED must be an integer, got {val!r}") from e
