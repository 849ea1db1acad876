"""Number modes: exact rationals or binary floating point.

A model picks one mode and every table, weight and matrix in it follows.
Exact mode stores :class:`fractions.Fraction` values in ``dtype=object``
numpy arrays; float mode uses ``float64`` arrays.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

import numpy as np

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

Number = Union[Fraction, float]

FLOAT_SUM_TOL = 1e-12


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown number mode {mode!r}; expected one of {MODES}")
    return mode


def parse_number(text) -> Fraction:
    """Parse ``"p/q"``, a decimal string, an int or a Fraction exactly.

    Python floats are converted through their shortest repr, so ``0.2``
    becomes ``1/5`` rather than the binary expansion.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a number: {text!r}")
    if isinstance(text, (int, Rational)):
        return Fraction(text)
    if isinstance(text, float):
        if not np.isfinite(text):
            raise ValueError(f"not a finite number: {text!r}")
        return Fraction(repr(text))
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse number {text!r}") from exc
    raise ValueError(f"not a number: {text!r}")


def infer_mode(values: Iterable) -> str:
    """Exact unless some input is a Python float."""
    return FLOAT if any(isinstance(v, float) for v in values) else EXACT


def convert(value, mode: str) -> Number:
    if mode == EXACT:
        return parse_number(value)
    if isinstance(value, str):
        return float(parse_number(value))
    return float(value)


def array(values, mode: str) -> np.ndarray:
    """Build an array of the mode's scalar type from nested sequences."""
    if mode == EXACT:
        arr = np.array(values, dtype=object)
        flat = arr.reshape(-1)
        for i, v in enumerate(flat):
            flat[i] = parse_number(v)
        return flat.reshape(arr.shape)
    return np.array(values, dtype=float)


def zeros(shape, mode: str) -> np.ndarray:
    if mode == EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=float)


def mode_of(arr: np.ndarray) -> str:
    return EXACT if arr.dtype == object else FLOAT


def one(mode: str) -> Number:
    return Fraction(1) if mode == EXACT else 1.0


def zero(mode: str) -> Number:
    return Fraction(0) if mode == EXACT else 0.0


def is_unit_sum(total, mode: str, tol: float = FLOAT_SUM_TOL) -> bool:
    if mode == EXACT:
        return total == 1
    return abs(float(total) - 1.0) <= tol


def to_float(arr: np.ndarray) -> np.ndarray:
    return np.asarray(arr, dtype=float)


def format_number(value) -> str:
    """Rationals as ``p/q`` (or ``p`` when integral); floats via repr."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))
