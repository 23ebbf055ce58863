"""Sliding-window experiment driver.

Window steps are 1-based: step s covers snapshot columns s .. s+w-1 of the
trajectory (so the first window is the first w columns).  Every method in
the configuration is fitted on each window independently; a failure in one
method on one window is recorded as a marker on that cell, not propagated.

Forecasts start from the last column of the window.  The truth for lead k
is column s+w-1+k (1-based), and leads that run past the end of the
trajectory are recorded as absent rather than errors.

Set KS_NUM_THREADS to evaluate windows concurrently; results are emitted in
step order either way, and for a fixed configuration and seed the metrics
files are bit-identical run to run.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .._validation import EPS
from ..exceptions import BadParamsError, InsufficientDataError, NumericalError
from ..kernels import KernelSpec
from ..koopman import (
    SnapshotPairs,
    build_diag_model,
    build_ks_model,
    consistency_residuals,
    diag_forecast,
    diag_reconstruct,
    forecast,
    reconstruct_snapshots,
)

__all__ = [
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
]

METHODS = ("dmd", "edmd", "ks_ssmd", "ks_essmd")
SCHUR_METHODS = ("ks_ssmd", "ks_essmd")

# methods on the explicit/linear route ignore the configured kernel
_EXPLICIT_METHODS = frozenset({"dmd", "ks_ssmd"})


def method_kernel(method: str, kernel: KernelSpec) -> KernelSpec:
    """The kernel a method actually uses (explicit-route methods are tied
    to the plain state inner product)."""
    return KernelSpec("linear") if method in _EXPLICIT_METHODS else kernel


def fit_method(
    method: str,
    data: SnapshotPairs,
    kernel: KernelSpec,
    tol: float | None = None,
    schur_kind: str = "auto",
    spurious_threshold: float | None = None,
):
    """Build the model a method name denotes.  Returns either a Schur model
    or a diagonalization model; model_summary accepts both."""
    if method not in METHODS:
        raise BadParamsError(f"unknown method {method!r}; expected one of {METHODS}")
    kernel = method_kernel(method, kernel)
    if method in SCHUR_METHODS:
        return build_ks_model(
            data,
            kernel=kernel,
            tol=tol,
            dictionary="explicit" if method == "ks_ssmd" else "kernel",
            schur_kind=schur_kind,
            spurious_threshold=spurious_threshold,
        )
    return build_diag_model(data, kernel=kernel, tol=tol, variant=method)


def model_summary(model) -> dict:
    """Uniform per-model metrics: eigenvalues, max relative reconstruction
    error, max consistency residual relative to sigma_1 (Schur models only),
    and the two condition numbers."""
    if hasattr(model, "schur"):
        _, _, max_recon = reconstruct_snapshots(model)
        residuals = consistency_residuals(model)
        scale = float(model.svd.sigma[0])
        max_consist = float(residuals.max() / scale) if residuals.size else 0.0
        kappa_eigvec = 1.0
        eigs = model.schur.eigenvalues
    else:
        _, _, max_recon = diag_reconstruct(model)
        max_consist = None
        kappa_eigvec = float(model.eigvec_condition)
        eigs = model.eigenvalues
    return {
        "eigenvalues": tuple(complex(v) for v in eigs),
        "max_reconstruction_error": float(max_recon),
        "max_consistency_residual": max_consist,
        "kappa_psi_x": float(model.svd.condition),
        "kappa_eigvec": kappa_eigvec,
    }


@dataclass(frozen=True)
class ExperimentConfig:
    window_width: int = 100
    horizon: int = 40
    steps: int = 100
    methods: tuple[str, ...] = ("ks_ssmd",)
    kernel: KernelSpec = field(default_factory=lambda: KernelSpec("linear"))
    tol: float | None = None
    schur_kind: str = "auto"
    spurious_threshold: float | None = None
    seed: int = 0
    dt: float = 1.0

    def __post_init__(self) -> None:
        if self.window_width < 2:
            raise BadParamsError(f"window_width must be >= 2, got {self.window_width}")
        if self.horizon < 0:
            raise BadParamsError(f"horizon must be >= 0, got {self.horizon}")
        if self.steps < 1:
            raise BadParamsError(f"steps must be >= 1, got {self.steps}")
        if not self.methods:
            raise BadParamsError("at least one method is required")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise BadParamsError(f"unknown method(s) {bad}; expected a subset of {METHODS}")
        if len(set(self.methods)) != len(self.methods):
            raise BadParamsError("methods contains duplicates")


@dataclass(frozen=True)
class MethodMetrics:
    method: str
    eigenvalues: tuple[complex, ...] = ()
    max_reconstruction_error: float | None = None
    max_consistency_residual: float | None = None
    forecast_errors: tuple[float | None, ...] = ()
    kappa_psi_x: float | None = None
    kappa_eigvec: float | None = None
    failed: bool = False
    failure: str | None = None


@dataclass(frozen=True)
class WindowMetrics:
    step: int
    per_method: dict[str, MethodMetrics]


def _relative_forecast_errors(pred: np.ndarray, Z: np.ndarray, last: int, horizon: int):
    """Per-lead relative error, None once the truth runs out."""
    M = Z.shape[1]
    errors: list[float | None] = []
    for k in range(1, horizon + 1):
        idx = last + k
        if idx >= M:
            errors.append(None)
            continue
        truth = Z[:, idx]
        scale = np.linalg.norm(truth)
        if scale == 0.0:
            scale = 1.0
        errors.append(float(np.linalg.norm(pred[:, k - 1] - truth) / scale))
    return tuple(errors)


def _run_method(method: str, Z: np.ndarray, o: int, config: ExperimentConfig) -> MethodMetrics:
    w = config.window_width
    X = Z[:, o : o + w]
    Y = Z[:, o + 1 : o + w + 1]
    data = SnapshotPairs(X, Y, dt=config.dt)
    model = fit_method(
        method,
        data,
        config.kernel,
        tol=config.tol,
        schur_kind=config.schur_kind,
        spurious_threshold=config.spurious_threshold,
    )
    summary = model_summary(model)
    x_last = X[:, -1]
    if config.horizon == 0:
        pred = np.zeros((Z.shape[0], 0))
    elif method in SCHUR_METHODS:
        pred = forecast(model, x_last, config.horizon)
    else:
        pred = diag_forecast(model, x_last, config.horizon)
    return MethodMetrics(
        method=method,
        forecast_errors=_relative_forecast_errors(pred, Z, o + w - 1, config.horizon),
        **summary,
    )


def _run_window(step: int, Z: np.ndarray, config: ExperimentConfig) -> WindowMetrics:
    per_method: dict[str, MethodMetrics] = {}
    for method in config.methods:
        try:
            per_method[method] = _run_method(method, Z, step - 1, config)
        except (ValueError, NumericalError) as exc:
            per_method[method] = MethodMetrics(
                method=method, failed=True, failure=f"{type(exc).__name__}: {exc}"
            )
    return WindowMetrics(step=step, per_method=per_method)


def _thread_count() -> int:
    raw = os.environ.get("KS_NUM_THREADS", "")
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError:
        raise BadParamsError(f"KS_NUM_THREADS must be an integer, got {raw!r}") from None
    if count < 1:
        raise BadParamsError(f"KS_NUM_THREADS must be >= 1, got {count}")
    return count


def run_sliding_windows(Z: np.ndarray, config: ExperimentConfig) -> list[WindowMetrics]:
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2:
        raise BadParamsError(f"trajectory must be 2-d, got shape {Z.shape}")
    M = Z.shape[1]
    needed = config.window_width + config.steps
    if M < needed:
        raise InsufficientDataError(
            f"trajectory has {M} snapshots; {config.steps} windows of width "
            f"{config.window_width} need at least {needed}"
        )
    steps = range(1, config.steps + 1)
    threads = _thread_count()
    if threads == 1:
        return [_run_window(s, Z, config) for s in steps]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: _run_window(s, Z, config), steps))


def machine_precision_floor(Z: np.ndarray) -> float:
    """Reference level for error plots: eps scaled by problem size."""
    return float(EPS * max(Z.shape))


# -- serialization ----------------------------------------------------------

_CSV_FIELDS = (
    "step",
    "method",
    "failed",
    "failure",
    "rank",
    "max_reconstruction_error",
    "max_consistency_residual",
    "kappa_psi_x",
    "kappa_eigvec",
    "eigenvalues",
    "forecast_errors",
)


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return "%.17g" % value


def _method_payload(mm: MethodMetrics) -> dict:
    return {
        "method": mm.method,
        "failed": mm.failed,
        "failure": mm.failure,
        "eigenvalues": [[v.real, v.imag] for v in mm.eigenvalues],
        "max_reconstruction_error": mm.max_reconstruction_error,
        "max_consistency_residual": mm.max_consistency_residual,
        "forecast_errors": list(mm.forecast_errors),
        "condition_numbers": {
            "kappa_psi_x": mm.kappa_psi_x,
            "kappa_eigvec": mm.kappa_eigvec,
        },
    }


def save_metrics(metrics: list[WindowMetrics], path, fmt: str = "json") -> None:
    if fmt == "json":
        payload = [
            {
                "step": wm.step,
                "methods": {name: _method_payload(mm) for name, mm in wm.per_method.items()},
            }
            for wm in metrics
        ]
        with open(path, "w", encoding="ascii") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        return
    if fmt != "csv":
        raise BadParamsError(f"unknown metrics format {fmt!r}; expected 'json' or 'csv'")
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_FIELDS)
        for wm in metrics:
            for name, mm in wm.per_method.items():
                eig_text = ";".join(
                    "(%.17g,%.17g)" % (v.real, v.imag) for v in mm.eigenvalues
                )
                fc_text = ";".join(_fmt(v) for v in mm.forecast_errors)
                writer.writerow(
                    [
                        wm.step,
                        name,
                        int(mm.failed),
                        mm.failure or "",
                        len(mm.eigenvalues),
                        _fmt(mm.max_reconstruction_error),
                        _fmt(mm.max_consistency_residual),
                        _fmt(mm.kappa_psi_x),
                        _fmt(mm.kappa_eigvec),
                        eig_text,
                        fc_text,
                    ]
                )


def load_metrics(path) -> list[WindowMetrics]:
    """Inverse of save_metrics(fmt='json')."""
    with open(path, "r", encoding="ascii") as fh:
        payload = json.load(fh)
    out: list[WindowMetrics] = []
    for entry in payload:
        per_method = {}
        for name, raw in entry["methods"].items():
            cond = raw.get("condition_numbers") or {}
            per_method[name] = MethodMetrics(
                method=raw["method"],
                eigenvalues=tuple(complex(re, im) for re, im in raw["eigenvalues"]),
                max_reconstruction_error=raw["max_reconstruction_error"],
                max_consistency_residual=raw["max_consistency_residual"],
                forecast_errors=tuple(raw["forecast_errors"]),
                kappa_psi_x=cond.get("kappa_psi_x"),
                kappa_eigvec=cond.get("kappa_eigvec"),
                failed=raw["failed"],
                failure=raw["failure"],
            )
        out.append(WindowMetrics(step=entry["step"], per_method=per_method))
    return out
