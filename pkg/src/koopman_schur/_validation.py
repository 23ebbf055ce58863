"""Input validation helpers shared across the package.

All helpers return ndarrays in double precision (float64 or complex128) and
raise the package's exception taxonomy rather than bare numpy errors.
"""

from __future__ import annotations

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    NonFiniteError,
    NotSquareError,
)

EPS = float(np.finfo(np.float64).eps)


def as_dense(a, name: str = "matrix", *, allow_complex: bool = True) -> np.ndarray:
    """Coerce to a 2-d double precision array with finite entries."""
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-d, got ndim={arr.ndim}")
    if arr.size == 0:
        raise DimensionMismatchError(f"{name} must have at least one entry")
    arr = _promote(arr, name, allow_complex)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return arr


def as_vector(v, name: str = "vector", *, allow_complex: bool = True) -> np.ndarray:
    """Coerce to a 1-d double precision array with finite entries."""
    arr = np.asarray(v)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise DimensionMismatchError(f"{name} must be 1-d, got ndim={arr.ndim}")
    arr = _promote(arr, name, allow_complex)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return arr


def require_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    if a.shape[0] != a.shape[1]:
        raise NotSquareError(f"{name} must be square, got shape {a.shape}")
    return a


def frozen(a: np.ndarray) -> np.ndarray:
    """Return a read-only view-owning copy; model fields are immutable."""
    out = np.array(a, copy=True)
    out.setflags(write=False)
    return out


def _promote(arr: np.ndarray, name: str, allow_complex: bool) -> np.ndarray:
    if np.iscomplexobj(arr):
        if not allow_complex:
            raise DimensionMismatchError(f"{name} must be real")
        return arr.astype(np.complex128, copy=False)
    if not np.issubdtype(arr.dtype, np.number) and arr.dtype != np.bool_:
        raise DimensionMismatchError(f"{name} has non-numeric dtype {arr.dtype}")
    return arr.astype(np.float64, copy=False)
