"""DMD/EDMD baselines: diagonalization of the compressed operator.

These are the classical methods the Schur path is measured against.  They
share the compression step and differ in what happens to Uhat afterwards:
here it is diagonalized, and the eigenvector basis condition number kappa_2(S)
is recorded because it is the quantity that blows up on nearly defective
operators.  A numerically singular eigenvector matrix is reported with the
+inf sentinel, not an error: that pathology is data.

Variant conventions:
  dmd    explicit dictionary, linear kernel forced; diagonalizes A = Uhat^t
         (the transpose convention of companion-matrix DMD) and stores
         S = G^-t so that Uhat S = S diag(omega) still holds; modes are
         conj(V) G.
  edmd   kernel route; diagonalizes Uhat directly; modes are
         X conj(W) Sigma^-1 S^-t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._validation import as_dense, as_vector, frozen
from ..exceptions import BadParamsError, DiagonalizationError, DimensionMismatchError
from ..kernels import KernelSpec, gram
from ..linalg import TruncatedSvd, modulus_descending_order, spectral_condition
from .compression import explicit_quotient, rayleigh_quotient
from .data import SnapshotPairs
from .schur_model import relative_snapshot_errors

__all__ = [
    "DiagonalizationModel",
    "diagonalize_operator",
    "build_diag_model",
    "evaluate_eigenfunctions",
    "diag_reconstruct",
    "diag_forecast",
]

VARIANTS = ("dmd", "edmd")


@dataclass(frozen=True)
class DiagonalizationModel:
    """Ritz values, eigenvector basis, tabulated eigenfunctions and modes.

    ``phi_x`` is m x r with row i = phi(x_i) = values of the approximate
    eigenfunctions at snapshot i; ``modes`` is n x r with column j the mode
    gamma_j, so X^hat = modes @ phi_x^t.
    """

    kernel: KernelSpec
    X_ref: np.ndarray
    svd: TruncatedSvd
    eigenvalues: np.ndarray
    S: np.ndarray
    phi_x: np.ndarray
    modes: np.ndarray
    eigvec_condition: float
    uhat: np.ndarray
    variant: str
    dt: float = 1.0

    def __post_init__(self):
        for name in ("X_ref", "eigenvalues", "S", "phi_x", "modes", "uhat"):
            object.__setattr__(self, name, frozen(getattr(self, name)))

    @property
    def rank(self) -> int:
        return self.svd.rank

    @property
    def m(self) -> int:
        return self.X_ref.shape[1]

    @property
    def n(self) -> int:
        return self.X_ref.shape[0]


def diagonalize_operator(uhat) -> tuple[np.ndarray, np.ndarray, float]:
    """Eigenvalues, unit-norm eigenvector matrix and its condition number.

    The condition number is +inf when the eigenvector basis is numerically
    singular; that is a reported measurement, never an exception.
    """
    uhat = as_dense(uhat, "Uhat")
    try:
        lam, S = np.linalg.eig(uhat)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise DiagonalizationError(f"eigensolver failed to converge: {exc}") from exc
    order = modulus_descending_order(lam)
    lam, S = lam[order], np.ascontiguousarray(S[:, order])
    return lam, S, spectral_condition(S)


def _inverse_transpose(S: np.ndarray) -> np.ndarray:
    """S^-t with a pseudoinverse fallback for singular bases."""
    r = S.shape[0]
    try:
        return np.linalg.solve(S.T, np.eye(r, dtype=S.dtype))
    except np.linalg.LinAlgError:
        return np.linalg.pinv(S.T)


def build_diag_model(
    data: SnapshotPairs,
    kernel: KernelSpec | None = None,
    tol: float | None = None,
    variant: str = "dmd",
) -> DiagonalizationModel:
    if variant not in VARIANTS:
        raise BadParamsError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if kernel is None:
        kernel = KernelSpec(kind="linear")
    if variant == "dmd":
        if kernel.kind != "linear":
            raise BadParamsError("dmd uses the explicit full-state dictionary; "
                                 "only the linear kernel applies")
        svd, uhat, V = explicit_quotient(data, tol=tol)
        lam, G, kappa = diagonalize_operator(uhat.T)
        S = _inverse_transpose(G)
        modes = V.conj() @ G
    else:
        svd, uhat = rayleigh_quotient(data, kernel, tol=tol)
        lam, S, kappa = diagonalize_operator(uhat)
        modes = (data.X @ svd.W.conj() / svd.sigma[None, :]) @ _inverse_transpose(S)
    phi_x = (svd.W * svd.sigma) @ S
    return DiagonalizationModel(
        kernel=kernel,
        X_ref=np.array(data.X),
        svd=svd,
        eigenvalues=lam,
        S=S,
        phi_x=phi_x,
        modes=modes,
        eigvec_condition=float(kappa),
        uhat=uhat,
        variant=variant,
        dt=data.dt,
    )


def evaluate_eigenfunctions(model: DiagonalizationModel, x) -> np.ndarray:
    """phi(x) = (f(x, x_1) ... f(x, x_m)) W Sigma^-1 S at one state x."""
    x = as_vector(x, "x")
    if x.shape[0] != model.n:
        raise DimensionMismatchError(
            f"state has dimension {x.shape[0]}, model expects {model.n}"
        )
    k_row = gram(model.kernel, x[:, None], model.X_ref)
    return ((k_row @ model.svd.W) / model.svd.sigma[None, :] @ model.S).ravel()


def diag_reconstruct(model: DiagonalizationModel) -> tuple[np.ndarray, np.ndarray, float]:
    """Xhat = modes @ phi_x^t against the training snapshots."""
    Xhat = model.modes @ model.phi_x.T
    if not np.iscomplexobj(model.X_ref) and np.iscomplexobj(Xhat):
        Xhat = Xhat.real
    errors = relative_snapshot_errors(model.X_ref, Xhat)
    return Xhat, errors, float(np.max(errors))


def diag_forecast(model: DiagonalizationModel, x_current, horizon: int) -> np.ndarray:
    """Predictions sum_j gamma_j lambda_j^kappa phi_j(x), kappa = 1..horizon."""
    horizon = int(horizon)
    if horizon < 1:
        raise BadParamsError(f"horizon must be >= 1, got {horizon}")
    phi = evaluate_eigenfunctions(model, x_current).astype(np.complex128)
    out = np.empty((model.n, horizon), dtype=np.complex128)
    lam = model.eigenvalues
    for k in range(horizon):
        phi = phi * lam
        out[:, k] = model.modes @ phi
    if not np.iscomplexobj(model.X_ref):
        out = out.real
    return out
