"""Hermitian eigendecomposition, economy SVD and Gram-based truncated SVD.

The Hermitian solve and the direct SVD are delegated to LAPACK through numpy;
the contracts here add the ordering, truncation and error conventions the
rest of the package relies on.  The Schur decomposition and its reordering
live in their own modules and are implemented from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._validation import EPS, as_dense, frozen, require_square
from ..exceptions import (
    DimensionMismatchError,
    NotHermitianError,
    ZeroMatrixError,
)

__all__ = [
    "TruncatedSvd",
    "hermitian_eig",
    "truncated_svd_from_gram",
    "economy_svd",
    "upper_triangular_transpose_apply",
    "spectral_condition",
]

# Asymmetry beyond this relative level is treated as a caller error rather
# than roundoff to be symmetrized away.
HERMITIAN_RTOL = 1e-8


@dataclass(frozen=True)
class TruncatedSvd:
    """Rank-truncated factors of the dictionary evaluation matrix.

    ``W`` holds the kept left factors (orthonormal columns), ``sigma`` the
    kept singular values in non-increasing order.  ``discarded_mass`` is the
    fraction of squared spectral mass removed by the truncation.
    """

    W: np.ndarray
    sigma: np.ndarray
    rank: int
    truncation_tol: float
    discarded_mass: float

    def __post_init__(self):
        object.__setattr__(self, "W", frozen(self.W))
        object.__setattr__(self, "sigma", frozen(self.sigma))

    @property
    def condition(self) -> float:
        """kappa_2 of the (truncated) dictionary matrix, sigma_1/sigma_r."""
        if self.sigma[-1] == 0.0:
            return np.inf
        return float(self.sigma[0] / self.sigma[-1])


def hermitian_eig(C) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized internally before solving; asymmetry beyond
    ``1e-8 * max|C|`` raises NotHermitianError instead.
    """
    C = require_square(as_dense(C, "C"), "C")
    scale = np.max(np.abs(C))
    if scale > 0.0:
        asym = np.max(np.abs(C - C.conj().T))
        if asym > HERMITIAN_RTOL * scale:
            raise NotHermitianError(
                f"asymmetry {asym:.3e} exceeds {HERMITIAN_RTOL:.0e} * max|C| = "
                f"{HERMITIAN_RTOL * scale:.3e}"
            )
    H = 0.5 * (C + C.conj().T)
    w, V = np.linalg.eigh(H)
    order = np.argsort(w)[::-1]
    return w[order], np.ascontiguousarray(V[:, order])


def truncated_svd_from_gram(Cxx, tol: float | None = None) -> TruncatedSvd:
    """Left SVD factors of Psi_x recovered from the Gram matrix Cxx.

    Cxx = W Sigma^2 W*, so sigma_i = sqrt(max(lambda_i, 0)); negative Gram
    eigenvalues are pure roundoff of a PSD matrix and are clamped to zero
    (hence always truncated).  Keeps indices with sigma_i > tol * sigma_1.

    The default tol is sqrt(m * eps): eigenvalue roundoff in the Gram sits
    at m * eps * lambda_1, which surfaces as sqrt(m * eps) * sigma_1 after
    the square root.  Anything below that is noise of the squaring, not rank.
    """
    Cxx = as_dense(Cxx, "Cxx")
    m = Cxx.shape[0]
    if tol is None:
        tol = float(np.sqrt(m * EPS))
    if not 0.0 < tol < 1.0:
        raise ValueError(f"truncation tolerance must lie in (0, 1), got {tol}")
    w, V = hermitian_eig(Cxx)
    sigma = np.sqrt(np.maximum(w, 0.0))
    if sigma[0] == 0.0:
        raise ZeroMatrixError("Gram matrix is zero; rank would be 0")
    keep = sigma > tol * sigma[0]
    r = int(np.count_nonzero(keep))
    total = float(np.sum(sigma**2))
    mass = float(np.sum(sigma[~keep] ** 2)) / total
    return TruncatedSvd(
        W=V[:, :r],
        sigma=sigma[:r],
        rank=r,
        truncation_tol=float(tol),
        discarded_mass=mass,
    )


def economy_svd(A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Economy SVD A = W diag(sigma) V*, singular values non-increasing.

    Returns the raw (W, sigma, V) triple without truncation; V has
    orthonormal columns, shape (cols, min(rows, cols)).
    """
    A = as_dense(A, "A")
    if not np.any(A):
        raise ZeroMatrixError("economy_svd of the zero matrix")
    W, sigma, Vh = np.linalg.svd(A, full_matrices=False)
    return W, sigma, Vh.conj().T


def upper_triangular_transpose_apply(T, v, k: int) -> np.ndarray:
    """Apply (T^t)^k to v by k successive products, never forming T^k.

    T is the (quasi-)triangular factor of a SchurForm; plain transpose, no
    conjugation.  v may be a vector or a matrix of stacked column vectors.
    k = 0 returns v unchanged.
    """
    T = require_square(as_dense(T, "T"), "T")
    w = np.asarray(v)
    squeeze = w.ndim == 1
    if squeeze:
        w = w[:, None]
    if w.ndim != 2 or w.shape[0] != T.shape[0]:
        raise DimensionMismatchError(
            f"v has shape {np.shape(v)}, expected leading dimension {T.shape[0]}"
        )
    if k < 0:
        raise ValueError("k must be non-negative")
    Tt = T.T
    for _ in range(k):
        w = Tt @ w
    return w[:, 0] if squeeze else w


def spectral_condition(A) -> float:
    """2-norm condition number with +inf as the singular sentinel."""
    A = as_dense(A, "A")
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0 or s[-1] == 0.0 or not np.isfinite(s[0]):
        return np.inf
    return float(s[0] / s[-1])
