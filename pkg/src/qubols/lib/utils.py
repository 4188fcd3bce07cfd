import contextlib
import logging
import sys
from fractions import Fraction
from numbers import Rational
from typing import Any, Generator, List

import numpy as np

from qubols.lib.logger import print_exception

LOG = logging.getLogger(__name__)

_INT64 = np.iinfo(np.int64)


def to_fraction(value: Any) -> Fraction:
    """Convert an int, float, Fraction, numpy scalar or numeric string exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        return Fraction(int(value))
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f"Non-finite coefficient: {value}")
        return Fraction(float(value))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"Cannot convert {value!r} to an exact number")


def exact_array(values: Any) -> np.ndarray:
    """Build an exact numpy array.

    Integral data within the ``int64`` range becomes ``int64``; anything else
    becomes an ``object`` array of ``Fraction`` so that sums and products stay
    exact.
    """
    raw = np.asarray(values, dtype=object)
    fractions = np.vectorize(to_fraction, otypes=[object])(raw) if raw.size else raw
    if all(
        f.denominator == 1 and _INT64.min <= f <= _INT64.max for f in fractions.flat
    ):
        return np.array(
            [int(f) for f in fractions.flat], dtype=np.int64
        ).reshape(raw.shape)
    return fractions


def format_number(value: Fraction) -> str:
    """Render integral values without a denominator, others as decimals."""
    if value.denominator == 1:
        return str(value.numerator)
    return repr(float(value))


def tokenize(text: str) -> List[str]:
    return text.split()


@contextlib.contextmanager
def system_run() -> Generator[None, None, None]:
    try:
        yield
    except Exception as e:  # noqa: BLE001
        print_exception(e)
        sys.exit(1)
