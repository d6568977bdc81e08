"""Input checks shared by the estimator wrappers and the CLI.

sklearn's ``check_array`` rejects complex input, so disk points get their
own checker.
"""

import numbers

import numpy as np


def check_disk_points(X, name="X", min_points=1):
    """1-D complex array of points strictly inside the unit disk.

    Accepts complex arrays of shape ``(n,)`` or ``(n, 1)`` and real arrays of
    shape ``(n, 2)`` holding ``(re, im)`` pairs.
    """
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    elif arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D points, got shape {np.shape(X)}")
    if arr.size < min_points:
        raise ValueError(f"{name} needs at least {min_points} point(s)")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(np.abs(arr) >= 1.0):
        raise ValueError(f"{name} has points outside the open unit disk")
    return arr


def check_real_points(X, name="X", min_points=1):
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1 or arr.size < min_points:
        raise ValueError(f"{name} must be a non-empty 1-D array of reals")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_exponent(p, name="p", low=1.0, high=np.inf, closed_low=False):
    if not isinstance(p, numbers.Real):
        raise TypeError(f"{name} must be a real number")
    ok = (p >= low if closed_low else p > low) and p < high
    if not ok:
        raise ValueError(f"{name}={p} outside its admissible range")
    return float(p)


def check_seed(seed):
    if seed is None:
        return None
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral) or seed < 0:
        raise ValueError("seed must be a non-negative integer")
    return int(seed)
