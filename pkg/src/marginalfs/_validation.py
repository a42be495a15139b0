"""Input validation helpers shared by the public functions and estimators."""

import numbers

import numpy as np
from sklearn.utils.validation import check_array, check_X_y


def check_labels(labels, *, name="labels"):
    """Return ``labels`` as a 1-d int8 array, checking every entry is 0 or 1."""
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.dtype == bool:
        return arr.astype(np.int8)
    if arr.size and not np.issubdtype(arr.dtype, np.number):
        raise ValueError(f"{name} must be numeric 0/1 values")
    bad = (arr != 0) & (arr != 1)
    if np.any(bad):
        first = int(np.flatnonzero(bad)[0])
        raise ValueError(f"{name} must be 0 or 1; found {arr[first]!r} at position {first}")
    return arr.astype(np.int8)


def check_values(values, *, name="values"):
    """Return ``values`` as a non-empty 1-d float64 array of finite reals."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        first = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValueError(f"{name} must be finite; found {arr[first]!r} at position {first}")
    return arr


def check_feature_matrix(X, y):
    """Validate an (n_samples, n_features) matrix and its binary labels."""
    X, y = check_X_y(X, y, dtype=np.float64, ensure_all_finite=True, y_numeric=True)
    return X, check_labels(y, name="y")


def check_matrix(X):
    return check_array(X, dtype=np.float64, ensure_all_finite=True)


def check_positive_int(value, name, *, minimum=1):
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_probability(value, name, *, open_interval=True):
    value = float(value)
    lo_ok = value > 0 if open_interval else value >= 0
    if not (lo_ok and value < 1):
        raise ValueError(f"{name} must lie in (0, 1), got {value}")
    return value


def check_choice(value, name, choices):
    if value not in choices:
        raise ValueError(f"{name} must be one of {sorted(choices)}, got {value!r}")
    return value
