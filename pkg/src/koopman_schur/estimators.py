"""Estimator front end.

Thin scikit-learn style wrappers over the functional core for callers who
want fit/transform/predict with sample-major arrays.  Rows are time samples
here; internally everything is column-snapshot, so these classes transpose
on the way in and out and otherwise add nothing numerical.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import BadParamsError
from .kernels import KernelSpec
from .koopman import (
    SnapshotPairs,
    build_diag_model,
    build_ks_model,
    consistency_residuals,
    diag_forecast,
    diag_reconstruct,
    evaluate_eigenfunctions,
    evaluate_schur_functions,
    forecast,
    reconstruct_snapshots,
)

__all__ = ["KoopmanSchurDecomposition", "DynamicModeDecomposition"]


def _pairs_from_rows(X, Y, dt: float) -> SnapshotPairs:
    X = check_array(X, dtype=np.float64)
    if Y is None:
        if X.shape[0] < 3:
            raise BadParamsError(
                "a trajectory needs at least 3 rows; pass successor rows as y "
                "for plain snapshot pairs"
            )
        return SnapshotPairs(X[:-1].T, X[1:].T, dt=dt)
    Y = check_array(Y, dtype=np.float64)
    return SnapshotPairs(X.T, Y.T, dt=dt)


class KoopmanSchurDecomposition(BaseEstimator):
    """Koopman analysis through an orthonormal Schur basis.

    fit accepts either one trajectory (rows in time order) or explicit
    snapshot pairs via the y argument.  transform evaluates the Schur
    observables at new states; predict advances states forward.

    Parameters mirror the functional builder: kernel/sigma select the
    dictionary inner product, tol the rank truncation, dictionary the
    explicit (state-space SVD) or kernel (Gram) compression route.
    """

    def __init__(
        self,
        kernel: str = "linear",
        sigma: float | None = None,
        tol: float | None = None,
        dictionary: str = "kernel",
        schur_kind: str = "auto",
        spurious_threshold: float | None = None,
        dt: float = 1.0,
    ):
        self.kernel = kernel
        self.sigma = sigma
        self.tol = tol
        self.dictionary = dictionary
        self.schur_kind = schur_kind
        self.spurious_threshold = spurious_threshold
        self.dt = dt

    def fit(self, X, y=None):
        data = _pairs_from_rows(X, y, self.dt)
        self.model_ = build_ks_model(
            data,
            kernel=KernelSpec(self.kernel, sigma=self.sigma),
            tol=self.tol,
            dictionary=self.dictionary,
            schur_kind=self.schur_kind,
            spurious_threshold=self.spurious_threshold,
        )
        self.rank_ = self.model_.rank
        self.eigenvalues_ = self.model_.eigenvalues.copy()
        self.singular_values_ = self.model_.svd.sigma.copy()
        self.spurious_ = self.model_.spurious.copy()
        self.n_features_in_ = data.n
        return self

    def transform(self, X):
        """Schur observable values, one row per sample, r columns."""
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=np.float64)
        return np.vstack([evaluate_schur_functions(self.model_, x) for x in X])

    def predict(self, X, steps: int = 1):
        """Advance each row state `steps` transitions forward."""
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=np.float64)
        if steps < 1:
            raise BadParamsError(f"steps must be >= 1, got {steps}")
        return np.vstack([forecast(self.model_, x, steps)[:, -1] for x in X])

    def reconstruct(self):
        """Training snapshots as represented in the fitted basis (rows)."""
        check_is_fitted(self, "model_")
        Xhat, _, _ = reconstruct_snapshots(self.model_)
        return Xhat.T

    def consistency(self):
        """Row residuals of the one-step relation on the training data."""
        check_is_fitted(self, "model_")
        return consistency_residuals(self.model_)

    def score(self, X=None, y=None):
        """Negative max relative reconstruction error on the training set."""
        check_is_fitted(self, "model_")
        _, _, worst = reconstruct_snapshots(self.model_)
        return -float(worst)


class DynamicModeDecomposition(BaseEstimator):
    """Diagonalization baseline with the same front end.

    variant 'dmd' works on the states directly (linear kernel only);
    'edmd' diagonalizes the compressed operator from the kernel route.
    """

    def __init__(
        self,
        variant: str = "dmd",
        kernel: str = "linear",
        sigma: float | None = None,
        tol: float | None = None,
        dt: float = 1.0,
    ):
        self.variant = variant
        self.kernel = kernel
        self.sigma = sigma
        self.tol = tol
        self.dt = dt

    def fit(self, X, y=None):
        data = _pairs_from_rows(X, y, self.dt)
        self.model_ = build_diag_model(
            data,
            kernel=KernelSpec(self.kernel, sigma=self.sigma),
            tol=self.tol,
            variant=self.variant,
        )
        self.rank_ = self.model_.svd.rank
        self.eigenvalues_ = self.model_.eigenvalues.copy()
        self.modes_ = self.model_.modes.copy()
        self.eigvec_condition_ = self.model_.eigvec_condition
        self.n_features_in_ = data.n
        return self

    def transform(self, X):
        """Eigenfunction values, one row per sample, r columns."""
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=np.float64)
        return np.vstack([evaluate_eigenfunctions(self.model_, x) for x in X])

    def predict(self, X, steps: int = 1):
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=np.float64)
        if steps < 1:
            raise BadParamsError(f"steps must be >= 1, got {steps}")
        return np.vstack([diag_forecast(self.model_, x, steps)[:, -1] for x in X])

    def reconstruct(self):
        check_is_fitted(self, "model_")
        Xhat, _, _ = diag_reconstruct(self.model_)
        return Xhat.T

    def score(self, X=None, y=None):
        check_is_fitted(self, "model_")
        _, _, worst = diag_reconstruct(self.model_)
        return -float(worst)
