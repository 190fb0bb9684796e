"""Input validation helpers.

scikit-learn's ``check_array`` rejects complex input, and spectral points
here are complex, so the few checks needed are kept local.
"""
from __future__ import annotations

import numpy as np

__all__ = ["check_points", "check_vector", "as_matrix", "check_positive_int"]


def check_points(X, name: str = "X") -> np.ndarray:
    """Coerce to a finite 1-D complex array (a column vector is flattened)."""
    pts = np.asarray(X, dtype=complex)
    if pts.ndim == 2 and 1 in pts.shape:
        pts = pts.ravel()
    if pts.ndim == 0:
        pts = pts.reshape(1)
    if pts.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {pts.shape}")
    if pts.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(pts)):
        raise ValueError(f"{name} contains non-finite values")
    return pts


def check_vector(z, dim: int, name: str = "z") -> np.ndarray:
    z = np.array(z, dtype=float).ravel()
    if z.shape != (dim,):
        raise ValueError(f"{name} has dimension {z.size}, expected {dim}")
    return z


def as_matrix(M, name: str = "M") -> np.ndarray:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2:
        raise ValueError(f"{name} must be a matrix")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite values")
    return M


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
