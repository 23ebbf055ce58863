"""Koopman spectral analysis on orthonormal Schur bases.

The core idea: compress the snapshot data onto its leading left singular
subspace, form the Rayleigh quotient of the transition operator there, and
take its Schur form instead of its eigendecomposition.  The resulting modal
basis is unitary regardless of how defective the spectrum is, so
reconstruction and forecasting stay well conditioned where plain
(E)DMD-style diagonalization degrades or breaks.

Layers, bottom up: linalg (decompositions, in-house Schur with eigenvalue
reordering), kernels, koopman (model builders and evaluation), harness
(generators, file formats, sliding-window driver, charts), estimators
(scikit-learn style front end) and cli.
"""

from . import exceptions, harness
from .estimators import DynamicModeDecomposition, KoopmanSchurDecomposition
from .kernels import KERNEL_KINDS, KernelSpec, eval_kernel, gram
from .koopman import (
    DiagonalizationModel,
    KoopmanSchurModel,
    ModalReconstruction,
    SnapshotPairs,
    build_diag_model,
    build_ks_model,
    consistency_residuals,
    diag_forecast,
    diag_reconstruct,
    evaluate_eigenfunctions,
    evaluate_schur_functions,
    forecast,
    pairs_from_trajectories,
    pairs_from_trajectory,
    reconstruct_snapshots,
    subset_reconstruction,
    subset_weighted_ls,
)
from .linalg import (
    SchurForm,
    TruncatedSvd,
    economy_svd,
    modulus_descending_order,
    reorder_schur,
    schur_decompose,
    truncated_svd_from_gram,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "exceptions",
    "harness",
    "KernelSpec",
    "KERNEL_KINDS",
    "eval_kernel",
    "gram",
    "SnapshotPairs",
    "pairs_from_trajectory",
    "pairs_from_trajectories",
    "KoopmanSchurModel",
    "build_ks_model",
    "evaluate_schur_functions",
    "reconstruct_snapshots",
    "consistency_residuals",
    "forecast",
    "DiagonalizationModel",
    "build_diag_model",
    "evaluate_eigenfunctions",
    "diag_reconstruct",
    "diag_forecast",
    "ModalReconstruction",
    "subset_weighted_ls",
    "subset_reconstruction",
    "TruncatedSvd",
    "economy_svd",
    "truncated_svd_from_gram",
    "SchurForm",
    "schur_decompose",
    "reorder_schur",
    "modulus_descending_order",
    "KoopmanSchurDecomposition",
    "DynamicModeDecomposition",
]
