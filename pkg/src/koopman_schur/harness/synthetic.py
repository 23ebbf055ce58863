"""Synthetic trajectory generators for experiments and tests.

Linear kinds iterate x_{k+1} = A x_k for a structured A; the nonlinear kind
integrates a planar limit-cycle normal form with fixed-step RK4.  For a fixed
seed every generator is deterministic; the seed only enters where randomness
is part of the construction (the orthogonal similarity of linear_spectrum).
"""

from __future__ import annotations

import numpy as np

from .._validation import as_vector
from ..exceptions import BadParamsError

__all__ = ["generate_synthetic", "SYNTHETIC_KINDS"]

SYNTHETIC_KINDS = ("linear_spectrum", "jordan_block", "rotation", "stuart_landau_like")


def generate_synthetic(kind: str, params: dict | None, m_total: int, seed: int = 0) -> np.ndarray:
    """Trajectory z_1..z_{m_total+1} as an n x (m_total+1) matrix."""
    if kind not in SYNTHETIC_KINDS:
        raise BadParamsError(f"unknown synthetic kind {kind!r}; expected one of {SYNTHETIC_KINDS}")
    m_total = int(m_total)
    if m_total < 1:
        raise BadParamsError(f"m_total must be >= 1, got {m_total}")
    params = dict(params or {})
    if kind == "linear_spectrum":
        return _linear_spectrum(params, m_total, seed)
    if kind == "jordan_block":
        return _jordan_block(params, m_total)
    if kind == "rotation":
        return _rotation(params, m_total)
    return _stuart_landau_like(params, m_total)


def _take(params: dict, key: str, default):
    return params.pop(key) if key in params else default


def _reject_leftovers(kind: str, params: dict) -> None:
    if params:
        raise BadParamsError(f"unknown parameter(s) for {kind}: {sorted(params)}")


def _iterate(A: np.ndarray, x0: np.ndarray, m_total: int) -> np.ndarray:
    n = A.shape[0]
    Z = np.empty((n, m_total + 1), dtype=np.float64)
    Z[:, 0] = x0
    for k in range(m_total):
        Z[:, k + 1] = A @ Z[:, k]
    return Z


def _real_block_diagonal(eigenvalues) -> np.ndarray:
    """Block diagonal with 1x1 blocks for real entries and rotation-scaled
    2x2 blocks for complex ones (listed with positive imaginary part)."""
    blocks = []
    for lam in eigenvalues:
        lam = complex(lam)
        if lam.imag == 0.0:
            blocks.append(np.array([[lam.real]]))
        elif lam.imag > 0.0:
            a, b = lam.real, lam.imag
            blocks.append(np.array([[a, -b], [b, a]]))
        else:
            raise BadParamsError(
                "list complex eigenvalues with positive imaginary part only; "
                f"the conjugate of {lam} is implied"
            )
    n = sum(b.shape[0] for b in blocks)
    D = np.zeros((n, n))
    at = 0
    for b in blocks:
        s = b.shape[0]
        D[at : at + s, at : at + s] = b
        at += s
    return D


def _linear_spectrum(params: dict, m_total: int, seed: int) -> np.ndarray:
    eigenvalues = _take(params, "eigenvalues", None)
    similarity = _take(params, "similarity", "orthogonal")
    x0 = _take(params, "x0", None)
    _reject_leftovers("linear_spectrum", params)
    if eigenvalues is None:
        raise BadParamsError("linear_spectrum requires an 'eigenvalues' list")
    if np.isscalar(eigenvalues):
        eigenvalues = (eigenvalues,)
    D = _real_block_diagonal(eigenvalues)
    n = D.shape[0]
    if similarity == "orthogonal":
        rng = np.random.default_rng(seed)
        U, _ = np.linalg.qr(rng.standard_normal((n, n)))
    elif similarity == "identity":
        U = np.eye(n)
    else:
        raise BadParamsError(f"similarity must be 'orthogonal' or 'identity', got {similarity!r}")
    A = U @ D @ U.T
    x0 = U @ np.ones(n) if x0 is None else as_vector(np.asarray(x0, dtype=np.float64), "x0")
    if x0.shape[0] != n:
        raise BadParamsError(f"x0 has dimension {x0.shape[0]}, spectrum implies {n}")
    return _iterate(A, x0, m_total)


def _jordan_block(params: dict, m_total: int) -> np.ndarray:
    size = int(_take(params, "size", 10))
    lam = float(_take(params, "eigenvalue", 0.9))
    x0 = _take(params, "x0", None)
    _reject_leftovers("jordan_block", params)
    if size < 1:
        raise BadParamsError(f"jordan_block size must be >= 1, got {size}")
    A = lam * np.eye(size) + np.diag(np.ones(size - 1), 1)
    if x0 is None:
        x0 = np.zeros(size)
        x0[-1] = 1.0  # excite the whole chain through the superdiagonal
    else:
        x0 = as_vector(np.asarray(x0, dtype=np.float64), "x0")
        if x0.shape[0] != size:
            raise BadParamsError(f"x0 has dimension {x0.shape[0]}, block size is {size}")
    return _iterate(A, x0, m_total)


def _rotation(params: dict, m_total: int) -> np.ndarray:
    angle = float(_take(params, "angle", 0.3))
    x0 = _take(params, "x0", (1.0, 0.0))
    _reject_leftovers("rotation", params)
    c, s = np.cos(angle), np.sin(angle)
    A = np.array([[c, -s], [s, c]])
    x0 = as_vector(np.asarray(x0, dtype=np.float64), "x0")
    if x0.shape[0] != 2:
        raise BadParamsError("rotation is planar; x0 must have dimension 2")
    return _iterate(A, x0, m_total)


def _stuart_landau_like(params: dict, m_total: int) -> np.ndarray:
    radius = float(_take(params, "radius", 1.0))
    omega = float(_take(params, "omega", 1.0))
    gamma = float(_take(params, "gamma", 1.0))
    dt = float(_take(params, "dt", 0.05))
    substeps = int(_take(params, "substeps", 1))
    x0 = _take(params, "x0", None)
    _reject_leftovers("stuart_landau_like", params)
    if radius <= 0 or gamma <= 0 or dt <= 0 or substeps < 1:
        raise BadParamsError("stuart_landau_like needs radius > 0, gamma > 0, dt > 0, substeps >= 1")
    if x0 is None:
        x0 = np.array([0.25 * radius, 0.0])
    else:
        x0 = as_vector(np.asarray(x0, dtype=np.float64), "x0")
        if x0.shape[0] != 2:
            raise BadParamsError("stuart_landau_like is planar; x0 must have dimension 2")

    def rhs(v):
        x, y = v
        drive = gamma * (1.0 - (x * x + y * y) / (radius * radius))
        return np.array([drive * x - omega * y, drive * y + omega * x])

    Z = np.empty((2, m_total + 1))
    Z[:, 0] = x0
    h = dt / substeps
    v = x0.astype(np.float64, copy=True)
    for k in range(m_total):
        for _ in range(substeps):
            k1 = rhs(v)
            k2 = rhs(v + 0.5 * h * k1)
            k3 = rhs(v + 0.5 * h * k2)
            k4 = rhs(v + h * k3)
            v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        Z[:, k + 1] = v
    return Z
