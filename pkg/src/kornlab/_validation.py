"""Small input checks shared by the public functions and estimators."""

import math
from numbers import Real

import numpy as np


def check_exponent(p):
    """Return ``p`` as float, raising ``ValueError`` unless 1 < p < inf."""
    if isinstance(p, bool) or not isinstance(p, Real):
        raise TypeError(f"p must be a real number, got {type(p).__name__}")
    p = float(p)
    if not (1.0 < p < math.inf):
        raise ValueError("p must lie in (1, ∞)")
    return p


def check_positive(value, name):
    if isinstance(value, bool) or not isinstance(value, Real):
        raise TypeError(f"{name} must be a real number")
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


def check_resolution(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_ladder(ladder, h_max=math.inf):
    """Validate a strictly decreasing list of thickness values in (0, h_max)."""
    values = [float(h) for h in ladder]
    for h in values:
        if not (0 < h < h_max):
            raise ValueError(f"ladder value h={h!r} is outside (0, h_max={h_max:g})")
    for prev, cur in zip(values, values[1:]):
        if not cur < prev:
            raise ValueError(f"ladder must be strictly decreasing ({prev!r} then {cur!r})")
    return values


def check_finite(array, what, locate=None):
    """Raise ``EvaluationError`` at the first non-finite entry of ``array``.

    ``locate`` maps the flat index of the bad entry to a readable location.
    """
    from .exceptions import EvaluationError

    array = np.asarray(array)
    bad = ~np.isfinite(array)
    if bad.any():
        idx = int(np.flatnonzero(bad.ravel())[0])
        where = locate(idx) if locate is not None else f"flat index {idx}"
        raise EvaluationError(f"non-finite {what} at {where}")
    return array
