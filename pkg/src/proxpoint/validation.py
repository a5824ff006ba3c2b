"""Input validation helpers shared by the estimators and free functions."""

import numpy as np

from .exceptions import DimensionMismatch, NegativeEntry, NotStochastic

SUM_TOL = 1e-12


def check_prob_vector(p, name="p", atol=SUM_TOL):
    """Return ``p`` as a float64 1-D array after checking it lies on the simplex."""
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 1-D array, got shape {p.shape}")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise NegativeEntry(f"{name} has negative or non-finite entries")
    if abs(p.sum() - 1.0) > atol:
        raise NotStochastic(f"{name} sums to {p.sum():.17g}, not 1")
    return p


def check_bit_probs(r, name="r"):
    r = np.asarray(r, dtype=np.float64)
    if r.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {r.shape}")
    if np.any(r < 0) or np.any(r > 1) or not np.all(np.isfinite(r)):
        raise NegativeEntry(f"{name} entries must lie in [0, 1]")
    return r


def check_same_length(a, b, names=("a", "b")):
    if a.shape != b.shape:
        raise DimensionMismatch(f"{names[0]} has shape {a.shape} but {names[1]} has shape {b.shape}")


def check_positive(value, name):
    if not (np.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)
