"""Model construction and evaluation: the Schur path and the
diagonalization baselines, plus subset-mode amplitude fitting."""

from .compression import explicit_quotient, rayleigh_quotient
from .data import SnapshotPairs, pairs_from_trajectories, pairs_from_trajectory
from .diag_model import (
    DiagonalizationModel,
    build_diag_model,
    diag_forecast,
    diag_reconstruct,
    diagonalize_operator,
    evaluate_eigenfunctions,
)
from .schur_model import (
    KoopmanSchurModel,
    build_ks_model,
    consistency_residuals,
    evaluate_schur_functions,
    forecast,
    reconstruct_snapshots,
    represent_observables,
)
from .subset import ModalReconstruction, subset_reconstruction, subset_weighted_ls

__all__ = [
    "SnapshotPairs",
    "pairs_from_trajectory",
    "pairs_from_trajectories",
    "rayleigh_quotient",
    "explicit_quotient",
    "KoopmanSchurModel",
    "build_ks_model",
    "evaluate_schur_functions",
    "represent_observables",
    "reconstruct_snapshots",
    "consistency_residuals",
    "forecast",
    "DiagonalizationModel",
    "diagonalize_operator",
    "build_diag_model",
    "evaluate_eigenfunctions",
    "diag_reconstruct",
    "diag_forecast",
    "ModalReconstruction",
    "subset_weighted_ls",
    "subset_reconstruction",
]
