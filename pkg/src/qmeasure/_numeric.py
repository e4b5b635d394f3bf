"""Dual-mode arithmetic helpers: exact rationals or floats with an absolute tolerance."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

Number = Union[Fraction, int, float]

ABS_TOL = 1e-9

# scaled integers above this go to Python-int object arrays
_INT64_HEADROOM = 2**62


def all_exact(xs: Iterable) -> bool:
    return all(isinstance(x, Rational) for x in xs)


def parse_number(text) -> Number:
    """Parse ``"p/q"``, ``"0.25"``, ints or floats.

    Strings are read exactly (``"0.1"`` becomes ``Fraction(1, 10)``); Python
    floats stay floats.
    """
    if isinstance(text, bool):
        raise TypeError(f"cannot interpret {text!r} as a number")
    if isinstance(text, (Fraction, int)):
        return Fraction(text)
    if isinstance(text, float):
        return text
    if isinstance(text, str):
        s = text.strip()
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            return float(s)
    raise TypeError(f"cannot interpret {text!r} as a number")


def close(a: Number, b: Number, tol: float = ABS_TOL) -> bool:
    if isinstance(a, Rational) and isinstance(b, Rational):
        return a == b
    return abs(float(a) - float(b)) <= tol


def to_output(x: Number, exact: bool | None = None) -> str:
    """Serialize: ``p/q`` for rationals, 12 significant digits otherwise."""
    if exact is None:
        exact = isinstance(x, Rational)
    if exact and isinstance(x, Rational):
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return f"{float(x):.12g}"


def common_denominator(values: Iterable) -> int | None:
    """LCM of the denominators, or ``None`` if any value is not rational."""
    den = 1
    for v in values:
        if not isinstance(v, Rational):
            return None
        den = math.lcm(den, Fraction(v).denominator)
    return den


def int_array(ints: Sequence[int]) -> np.ndarray:
    """int64 when safe, otherwise an object array of Python ints."""
    if len(ints) == 0 or max(abs(int(i)) for i in ints) < _INT64_HEADROOM:
        return np.asarray(ints, dtype=np.int64)
    return np.asarray([int(i) for i in ints], dtype=object)


def widen(arr: np.ndarray, bound: int) -> np.ndarray:
    """Promote an int64 array to Python ints if ``bound`` would overflow."""
    if arr.dtype == np.int64 and bound >= _INT64_HEADROOM:
        return arr.astype(object)
    return arr


def max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(max(abs(int(arr.max())), abs(int(arr.min()))))
