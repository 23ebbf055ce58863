"""Compression of the Koopman operator onto the truncated data range.

Two routes to the same r x r Rayleigh quotient:

kernel route     Cxx = gram(f, X, X) = W S^2 W*, Cyx = gram(f, Y, X),
                 Uhat = S^-1 W* Cyx W S^-1
explicit route   Psi_x = X^T = W S V*,  Uhat = S^-1 W* (Y^T V)

They are algebraically identical for the linear kernel, but the kernel route
squares the condition number of Psi_x (it works on the Gram matrix), which is
exactly the trade the implicit-dictionary methods accept to stay m x m.
"""

from __future__ import annotations

import numpy as np

from ..exceptions import RankCollapseError
from ..kernels import KernelSpec, gram
from ..linalg import TruncatedSvd, economy_svd, truncated_svd_from_gram
from .data import SnapshotPairs

__all__ = ["rayleigh_quotient", "explicit_quotient"]


def rayleigh_quotient(
    data: SnapshotPairs, kernel: KernelSpec, tol: float | None = None
) -> tuple[TruncatedSvd, np.ndarray]:
    """Kernel-route compression: (truncated SVD factors of Psi_x, Uhat)."""
    Cxx = gram(kernel, data.X)
    Cyx = gram(kernel, data.Y, data.X)
    svd = truncated_svd_from_gram(Cxx, tol=tol)
    if svd.rank == 0:
        raise RankCollapseError("all singular values truncated; data range is empty")
    W, sigma = svd.W, svd.sigma
    uhat = (W.conj().T @ Cyx @ W) / np.outer(sigma, sigma)
    return svd, uhat


def explicit_quotient(
    data: SnapshotPairs, tol: float | None = None
) -> tuple[TruncatedSvd, np.ndarray, np.ndarray]:
    """Explicit full-state compression: (factors, Uhat, V).

    Works on Psi_x = X^T directly, so no Gram squaring.  V (n x r) carries
    the right singular vectors needed for explicit modes.
    """
    psi_x = data.X.T.copy()
    W, sigma, V = economy_svd(psi_x)
    if tol is None:
        tol = max(psi_x.shape) * np.finfo(np.float64).eps
    if not 0.0 < tol < 1.0:
        raise ValueError(f"truncation tol must be in (0, 1), got {tol}")
    keep = sigma > tol * sigma[0]
    r = int(np.count_nonzero(keep))
    if r == 0:
        raise RankCollapseError("all singular values truncated; data range is empty")
    discarded = float(np.sum(sigma[~keep] ** 2) / np.sum(sigma**2))
    W, sigma, V = W[:, :r], sigma[:r], V[:, :r]
    svd = TruncatedSvd(
        W=W, sigma=sigma, rank=r, truncation_tol=float(tol), discarded_mass=discarded
    )
    uhat = (W.conj().T @ (data.Y.T @ V)) / sigma[:, None]
    return svd, uhat, V
