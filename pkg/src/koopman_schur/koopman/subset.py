"""Subset-mode reconstruction via structured weighted least squares.

The amplitude problem min_alpha || (X - B diag(alpha) C^t) Omega ||_F is a
Khatri-Rao least-squares problem.  Its normal equations collapse to Hadamard
products of l x l matrices, so the solve costs O(l^3) regardless of n and m:

    [(B*B) o (C* Omega^2 C)] alpha = rowsum[ (B* X Omega^2) o conj(C)^t ]

Subset selection on a Koopman-Schur model composes this with Schur
reordering: the chosen eigenvalues are moved to the leading positions, the
flag is truncated there, and the amplitudes are fit for the truncated basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._validation import as_dense, as_vector, frozen
from ..exceptions import (
    DimensionMismatchError,
    NonPositiveWeightError,
    PairSplitError,
    SingularSystemError,
)
from ..linalg import diagonal_blocks, reorder_schur, spectral_condition
from .schur_model import KoopmanSchurModel

__all__ = ["ModalReconstruction", "subset_weighted_ls", "subset_reconstruction"]

SYSTEM_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class ModalReconstruction:
    coefficients: np.ndarray
    selected_indices: np.ndarray
    residual_fro: float
    weights: np.ndarray

    def __post_init__(self):
        for name in ("coefficients", "selected_indices", "weights"):
            object.__setattr__(self, name, frozen(getattr(self, name)))


def subset_weighted_ls(X, B, C, omega=None) -> ModalReconstruction:
    """Unique minimizer of ||(X - B diag(alpha) C^t) Omega||_F.

    omega is the diagonal of Omega as a positive vector (default: all ones).
    The residual is recomputed directly from the definition, never from the
    normal equations.
    """
    X = as_dense(X, "X")
    B = as_dense(B, "B")
    C = as_dense(C, "C")
    n, m = X.shape
    if B.shape[0] != n:
        raise DimensionMismatchError(f"B has {B.shape[0]} rows, X has {n}")
    if C.shape[0] != m:
        raise DimensionMismatchError(f"C has {C.shape[0]} rows, X has {m} columns")
    if B.shape[1] != C.shape[1]:
        raise DimensionMismatchError(
            f"B and C must have the same number of columns; got {B.shape[1]}, {C.shape[1]}"
        )
    if B.shape[1] == 0:
        raise DimensionMismatchError("need at least one mode to fit amplitudes")
    if omega is None:
        omega = np.ones(m)
    omega = as_vector(omega, "omega")
    if omega.shape[0] != m:
        raise DimensionMismatchError(f"omega has length {omega.shape[0]}, expected {m}")
    if np.iscomplexobj(omega) or np.any(omega <= 0):
        raise NonPositiveWeightError("weights must be positive reals")

    om2 = omega**2
    gram = (B.conj().T @ B) * (C.conj().T @ (om2[:, None] * C))
    rhs = np.sum((B.conj().T @ (X * om2[None, :])) * C.conj().T, axis=1)
    cond = spectral_condition(gram)
    if not np.isfinite(cond) or cond > SYSTEM_CONDITION_LIMIT:
        raise SingularSystemError(
            f"Khatri-Rao system condition {cond:.3e} exceeds {SYSTEM_CONDITION_LIMIT:.0e}; "
            "the selected modes are numerically dependent"
        )
    alpha = np.linalg.solve(gram, rhs)
    residual = float(
        np.linalg.norm((X - B @ (alpha[:, None] * C.T)) * omega[None, :])
    )
    return ModalReconstruction(
        coefficients=alpha,
        selected_indices=np.arange(B.shape[1]),
        residual_fro=residual,
        weights=omega,
    )


def subset_reconstruction(
    model: KoopmanSchurModel, X=None, indices=None, omega=None
) -> ModalReconstruction:
    """Reorder the model's Schur form, truncate to the selection, fit amplitudes.

    indices are 0-based eigenvalue positions in the model's current order.
    In the real form a selection must keep conjugate pairs whole; splitting
    one raises PairSplitError (unlike reorder_schur, nothing is auto-added:
    a silent extra amplitude would not be the requested reconstruction).
    """
    X = model.X_ref if X is None else as_dense(X, "X")
    if X.shape != model.X_ref.shape:
        raise DimensionMismatchError(
            f"X has shape {X.shape}, model was built over {model.X_ref.shape}"
        )
    if indices is None:
        indices = np.arange(model.rank)
    sel = np.atleast_1d(np.asarray(indices, dtype=np.intp)).ravel()
    if model.schur.kind == "real":
        _check_pairs_whole(model.schur.T, sel)

    form, theta = reorder_schur(model.schur, sel)
    ell = sel.shape[0]
    zeta = model.zeta_x @ theta
    xi = theta.conj().T @ model.xi
    B = xi[:ell, :].T
    C = zeta[:, :ell]
    fit = subset_weighted_ls(X, B, C, omega)
    return ModalReconstruction(
        coefficients=fit.coefficients,
        selected_indices=sel.copy(),
        residual_fro=fit.residual_fro,
        weights=fit.weights,
    )


def _check_pairs_whole(T: np.ndarray, sel: np.ndarray) -> None:
    chosen = set(int(i) for i in sel)
    for start, size in diagonal_blocks(T):
        if size == 2 and len(chosen & {start, start + 1}) == 1:
            raise PairSplitError(
                f"selection takes only one member of the conjugate pair at "
                f"positions ({start}, {start + 1}); select both or neither"
            )
