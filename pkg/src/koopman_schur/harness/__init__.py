"""Experiment support: synthetic generators, snapshot file formats, the
sliding-window driver, and SVG chart output."""

from .experiment import (
    METHODS,
    SCHUR_METHODS,
    ExperimentConfig,
    MethodMetrics,
    WindowMetrics,
    fit_method,
    load_metrics,
    machine_precision_floor,
    method_kernel,
    model_summary,
    run_sliding_windows,
    save_metrics,
)
from .io import FORMATS, load_snapshots, load_trajectories, save_snapshots
from .plots import error_curves_svg, eigenvalue_scatter_svg
from .synthetic import SYNTHETIC_KINDS, generate_synthetic

__all__ = [
    "SYNTHETIC_KINDS",
    "generate_synthetic",
    "FORMATS",
    "load_snapshots",
    "load_trajectories",
    "save_snapshots",
    "METHODS",
    "SCHUR_METHODS",
    "ExperimentConfig",
    "MethodMetrics",
    "WindowMetrics",
    "method_kernel",
    "fit_method",
    "model_summary",
    "run_sliding_windows",
    "save_metrics",
    "load_metrics",
    "machine_precision_floor",
    "eigenvalue_scatter_svg",
    "error_curves_svg",
]
