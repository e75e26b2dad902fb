"""Argument checks shared by the estimators."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import DomainError, ShapeError


def check_order(value, name: str, lower: float = 0.0, upper: float = 1.0) -> float:
    """Real number in ``(lower, upper]``."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if not lower < value <= upper:
        raise DomainError(f"{name} must lie in ({lower:g}, {upper:g}], got {value}")
    return value


def check_choice(value, name: str, choices) -> str:
    if value not in choices:
        raise ValueError(f"{name} must be one of {sorted(choices)}, got {value!r}")
    return value


def check_positive_int(value, name: str, allow_none: bool = True) -> int | None:
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_profiles(X, n_features: int | None = None, name: str = "X", owner: str = "estimator") -> np.ndarray:
    """2-D float array of interior grid values, one profile per row.

    A grid with ``N`` intervals has ``N - 1`` interior nodes, so one feature
    already describes the smallest admissible grid ``N = 2``.
    """
    X = check_array(X, dtype=np.float64, ensure_min_features=1, input_name=name)
    if n_features is not None and X.shape[1] != n_features:
        raise ShapeError(
            f"{name} has {X.shape[1]} features, but {owner} is expecting {n_features} features as input"
        )
    return X
