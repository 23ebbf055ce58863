"""Koopman analysis through the Schur form of the compressed operator.

The compressed operator Uhat is never diagonalized here.  Instead
Uhat = Q T Q* and everything downstream works with the unitary Q and the
(quasi-)triangular T: Schur-function values zeta_x = W Sigma Q, observable
coefficients Xi = Q* Sigma^-1 W* G, forecasts by repeated application of T^t.
Unitarity means the basis condition number is 1 regardless of how close the
underlying eigenvector basis is to degenerate, which is the entire point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._validation import as_dense, as_vector, frozen
from ..exceptions import (
    BadParamsError,
    DimensionMismatchError,
    ObservableMismatchError,
    TooFewSnapshotsError,
)
from ..kernels import KernelSpec, gram
from ..linalg import (
    SchurForm,
    TruncatedSvd,
    modulus_descending_order,
    reorder_schur,
    schur_decompose,
    upper_triangular_transpose_apply,
)
from .compression import explicit_quotient, rayleigh_quotient
from .data import SnapshotPairs

__all__ = [
    "KoopmanSchurModel",
    "build_ks_model",
    "evaluate_schur_functions",
    "represent_observables",
    "reconstruct_snapshots",
    "consistency_residuals",
    "forecast",
]

ORDER_POLICIES = ("modulus", "none")
DICTIONARIES = ("kernel", "explicit")


@dataclass(frozen=True)
class KoopmanSchurModel:
    """Everything needed to evaluate, reconstruct and forecast.

    ``zeta_x`` is m x r with row i = zeta(x_i); by construction it equals
    W diag(sigma) Q, so its singular values are exactly ``svd.sigma``.
    ``xi`` (r x l) represents the observables G in the zeta basis.
    ``spurious`` flags eigenvalues beyond the configured modulus threshold;
    they are reordered trailing but never removed.
    """

    kernel: KernelSpec
    X_ref: np.ndarray
    svd: TruncatedSvd
    schur: SchurForm
    zeta_x: np.ndarray
    xi: np.ndarray
    observable_kind: str
    uhat: np.ndarray
    dictionary: str
    spurious: np.ndarray
    dt: float = 1.0
    V: np.ndarray | None = None  # right singular vectors, explicit route only

    def __post_init__(self):
        for name in ("X_ref", "zeta_x", "xi", "uhat", "spurious"):
            object.__setattr__(self, name, frozen(getattr(self, name)))
        if self.V is not None:
            object.__setattr__(self, "V", frozen(self.V))

    @property
    def rank(self) -> int:
        return self.svd.rank

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.schur.eigenvalues

    @property
    def m(self) -> int:
        return self.X_ref.shape[1]

    @property
    def n(self) -> int:
        return self.X_ref.shape[0]


def build_ks_model(
    data: SnapshotPairs,
    kernel: KernelSpec | None = None,
    tol: float | None = None,
    order_policy: str = "modulus",
    dictionary: str = "kernel",
    schur_kind: str = "auto",
    spurious_threshold: float | None = None,
) -> KoopmanSchurModel:
    """Compression -> Schur -> reorder -> tabulate, full-state observables.

    dictionary "kernel" compresses through Gram matrices (any kernel);
    "explicit" runs the SVD on Psi_x = X^T itself, which requires the linear
    kernel but avoids squaring the conditioning.
    """
    if kernel is None:
        kernel = KernelSpec(kind="linear")
    if order_policy not in ORDER_POLICIES:
        raise BadParamsError(f"unknown order policy {order_policy!r}")
    if dictionary not in DICTIONARIES:
        raise BadParamsError(f"unknown dictionary {dictionary!r}")

    V = None
    if dictionary == "explicit":
        if kernel.kind != "linear":
            raise BadParamsError(
                "the explicit-dictionary path evaluates full-state observables "
                "and only admits the linear kernel"
            )
        svd, uhat, V = explicit_quotient(data, tol=tol)
    else:
        svd, uhat = rayleigh_quotient(data, kernel, tol=tol)

    form = schur_decompose(uhat, kind=schur_kind)
    if order_policy == "modulus":
        form, _ = reorder_schur(form, modulus_descending_order(form.eigenvalues))
    spurious = np.zeros(svd.rank, dtype=bool)
    if spurious_threshold is not None and np.isfinite(spurious_threshold):
        mask = np.abs(form.eigenvalues) > spurious_threshold
        if mask.any() and not mask.all():
            keep = np.flatnonzero(~mask)
            form, _ = reorder_schur(form, keep)
        spurious = np.abs(form.eigenvalues) > spurious_threshold

    zeta_x = (svd.W * svd.sigma) @ form.Q
    G = data.X.T
    xi = _xi_from_factors(svd, form, G)
    return KoopmanSchurModel(
        kernel=kernel,
        X_ref=np.array(data.X),
        svd=svd,
        schur=form,
        zeta_x=zeta_x,
        xi=xi,
        observable_kind="full-state",
        uhat=uhat,
        dictionary=dictionary,
        spurious=spurious,
        dt=data.dt,
        V=V,
    )


def _xi_from_factors(svd: TruncatedSvd, form: SchurForm, G: np.ndarray) -> np.ndarray:
    # Xi = Q* Sigma^-1 W* G, the pseudoinverse of zeta_x applied via factors
    return form.Q.conj().T @ ((svd.W.conj().T @ G) / svd.sigma[:, None])


def evaluate_schur_functions(model: KoopmanSchurModel, x) -> np.ndarray:
    """zeta(x) = (f(x, x_1) ... f(x, x_m)) W Sigma^-1 Q at one state x."""
    x = as_vector(x, "x")
    if x.shape[0] != model.n:
        raise DimensionMismatchError(
            f"state has dimension {x.shape[0]}, model expects {model.n}"
        )
    k_row = gram(model.kernel, x[:, None], model.X_ref)  # 1 x m
    return ((k_row @ model.svd.W) / model.svd.sigma[None, :] @ model.schur.Q).ravel()


def represent_observables(model: KoopmanSchurModel, G) -> np.ndarray:
    """Least-squares coefficients Xi of the observable values G in zeta_x."""
    G = as_dense(G, "G")
    if G.shape[0] != model.m:
        raise DimensionMismatchError(
            f"G has {G.shape[0]} rows, expected one per snapshot ({model.m})"
        )
    return _xi_from_factors(model.svd, model.schur, G)


def relative_snapshot_errors(X: np.ndarray, Xhat: np.ndarray) -> np.ndarray:
    """Per-column relative errors; absolute for columns of negligible norm."""
    diff = np.linalg.norm(X - Xhat, axis=0)
    norms = np.linalg.norm(X, axis=0)
    floor = np.finfo(np.float64).eps * np.linalg.norm(X)
    out = np.empty_like(diff)
    tiny = norms < floor
    out[tiny] = diff[tiny]
    out[~tiny] = diff[~tiny] / norms[~tiny]
    return out


def reconstruct_snapshots(
    model: KoopmanSchurModel, X=None
) -> tuple[np.ndarray, np.ndarray, float]:
    """Xhat = Xi^T zeta_x^T with per-snapshot relative errors and their max."""
    if model.observable_kind != "full-state":
        raise ObservableMismatchError(
            "snapshot reconstruction needs a model built with full-state observables"
        )
    X = model.X_ref if X is None else as_dense(X, "X")
    if X.shape != model.X_ref.shape:
        raise DimensionMismatchError(
            f"X has shape {X.shape}, model was built over {model.X_ref.shape}"
        )
    Xhat_t = model.zeta_x @ model.xi
    Xhat = Xhat_t.T
    if not np.iscomplexobj(X) and np.iscomplexobj(Xhat):
        Xhat = Xhat.real
    errors = relative_snapshot_errors(X, Xhat)
    return Xhat, errors, float(np.max(errors))


def consistency_residuals(model: KoopmanSchurModel, X=None) -> np.ndarray:
    """||zeta(x_j) - T^t zeta(x_{j-1})||_2 for j = 2..m, from tabulated rows.

    A data-level check that T reproduces the observed one-step dynamics:
    m-1 residuals for m snapshot pairs.
    """
    if X is not None:
        X = as_dense(X, "X")
        if X.shape != model.X_ref.shape:
            raise DimensionMismatchError(
                f"X has shape {X.shape}, model was built over {model.X_ref.shape}"
            )
    m = model.m
    if m < 2:
        raise TooFewSnapshotsError("consistency residuals need at least 2 snapshots")
    Z = model.zeta_x
    stepped = Z[:-1, :] @ model.schur.T  # row j-1 of zeta_x times T^t, transposed
    return np.linalg.norm(Z[1:, :] - stepped, axis=1)


def forecast(model: KoopmanSchurModel, x_current, horizon: int) -> np.ndarray:
    """Predicted states Xi^T (T^t)^kappa zeta(x), kappa = 1..horizon, as n x horizon.

    Powers of T are never formed; each step applies the triangular transpose
    once to the running Schur-function vector.
    """
    if model.observable_kind != "full-state":
        raise ObservableMismatchError(
            "forecasting states needs a model built with full-state observables"
        )
    horizon = int(horizon)
    if horizon < 1:
        raise BadParamsError(f"horizon must be >= 1, got {horizon}")
    zeta = evaluate_schur_functions(model, x_current)
    out = np.empty((model.xi.shape[1], horizon), dtype=np.result_type(zeta, model.xi))
    for k in range(horizon):
        zeta = upper_triangular_transpose_apply(model.schur.T, zeta, 1)
        out[:, k] = model.xi.T @ zeta
    if not np.iscomplexobj(model.X_ref) and np.iscomplexobj(out):
        out = out.real
    return out
