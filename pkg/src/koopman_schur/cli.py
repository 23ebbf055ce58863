"""ksmd command-line front end.

Commands: analyze (fit on the full dataset, write spectra and metrics),
stream (sliding-window experiment), forecast (hold out the tail, predict
it), compare (all four methods side by side), synth (write a generated
trajectory to a data file).

Option precedence is flags > --config file > built-in defaults, and the
effective configuration is echoed to <out>/effective_config.json so a run
can be reproduced from its output directory alone.

Exit codes: 0 success, 1 data or file problems, 2 numerical failures,
64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .exceptions import NumericalError
from .harness import (
    METHODS,
    SCHUR_METHODS,
    ExperimentConfig,
    error_curves_svg,
    eigenvalue_scatter_svg,
    fit_method,
    generate_synthetic,
    load_snapshots,
    machine_precision_floor,
    method_kernel,
    model_summary,
    run_sliding_windows,
    save_metrics,
    save_snapshots,
)
from .kernels import KernelSpec
from .koopman import (
    SnapshotPairs,
    diag_forecast,
    forecast,
    pairs_from_trajectory,
    subset_reconstruction,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_DATA = 1
EXIT_NUMERICAL = 2
EXIT_USAGE = 64

_FILE_FORMATS = {"csv": "csv", "raw": "raw_f64"}

_DEFAULTS = {
    "input": None,
    "format": "csv",
    "kernel": "linear",
    "sigma": None,
    "tol": None,
    "window": 100,
    "horizon": 40,
    "steps": 100,
    "method": "ks_ssmd",
    "schur": "auto",
    "select": None,
    "weights": None,
    "out": ".",
    "seed": 0,
    "plots": False,
    "factors": False,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on its own; route through UsageError
    # so every usage problem lands on 64
    def error(self, message):
        raise UsageError(message)


# -- configuration ----------------------------------------------------------


def _merge_config(args: argparse.Namespace) -> dict:
    effective = dict(_DEFAULTS)
    effective["command"] = args.command
    config_path = getattr(args, "config", None)
    if config_path is not None:
        try:
            with open(config_path, "r", encoding="ascii") as fh:
                loaded = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file {config_path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError(f"config file {config_path} must hold a JSON object")
        unknown = sorted(set(loaded) - set(_DEFAULTS))
        if unknown:
            raise UsageError(f"config file {config_path}: unknown key(s) {unknown}")
        for key, value in loaded.items():
            if value is not None:
                effective[key] = value
    for key in _DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            effective[key] = value
    return effective


def _kernel_from(config: dict) -> KernelSpec:
    kind = config["kernel"]
    sigma = config["sigma"]
    if kind not in ("linear", "gaussian"):
        raise UsageError(f"--kernel must be linear or gaussian, got {kind!r}")
    if kind == "gaussian" and sigma is None:
        raise UsageError("--kernel gaussian requires --sigma")
    if kind == "linear" and sigma is not None:
        raise UsageError("--sigma only applies to --kernel gaussian")
    return KernelSpec(kind, sigma=sigma)


def _schur_kind_from(config: dict) -> str:
    kind = config["schur"]
    if kind not in ("auto", "complex", "real"):
        raise UsageError(f"--schur must be complex or real, got {kind!r}")
    return kind


def _methods_from(config: dict) -> tuple[str, ...]:
    names = tuple(tok.strip() for tok in str(config["method"]).split(",") if tok.strip())
    if not names:
        raise UsageError("empty method list")
    bad = [m for m in names if m not in METHODS]
    if bad:
        raise UsageError(f"unknown method(s) {bad}; expected a subset of {list(METHODS)}")
    if len(set(names)) != len(names):
        raise UsageError("method list contains duplicates")
    return names


def _echo_config(config: dict, out_dir: str) -> None:
    path = os.path.join(out_dir, "effective_config.json")
    with open(path, "w", encoding="ascii") as fh:
        json.dump(config, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _out_dir(config: dict) -> str:
    out = config["out"]
    os.makedirs(out, exist_ok=True)
    return out


# -- input loading ----------------------------------------------------------


def _parse_scalar(text: str):
    for cast in (int, float, complex):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def _parse_synth_spec(spec: str) -> tuple[str, dict, int | None]:
    """'synth:kind,key=value,...' -> (kind, params, m_total or None).
    List values use ':' separators, e.g. x0=1:0."""
    body = spec[len("synth:") :]
    parts = [p for p in body.split(",") if p]
    if not parts:
        raise UsageError("synthetic spec needs a kind: synth:kind[,key=value...]")
    kind = parts[0]
    params: dict = {}
    m_total = None
    for item in parts[1:]:
        if "=" not in item:
            raise UsageError(f"synthetic spec entry {item!r} is not key=value")
        key, _, raw = item.partition("=")
        value = (
            tuple(_parse_scalar(tok) for tok in raw.split(":")) if ":" in raw
            else _parse_scalar(raw)
        )
        if key == "m":
            if not isinstance(value, int):
                raise UsageError(f"m must be an integer, got {raw!r}")
            m_total = value
        else:
            params[key] = value
    return kind, params, m_total


def _default_m_total(config: dict) -> int:
    if config["command"] == "stream":
        return config["window"] + config["steps"] + config["horizon"]
    return 240


def _load_input(config: dict) -> np.ndarray:
    source = config["input"]
    if source is None:
        raise UsageError("--input is required")
    if str(source).startswith("synth:"):
        kind, params, m_total = _parse_synth_spec(str(source))
        if m_total is None:
            m_total = _default_m_total(config)
        return generate_synthetic(kind, params, m_total, seed=config["seed"])
    fmt = config["format"]
    if fmt not in _FILE_FORMATS:
        raise UsageError(f"--format must be csv or raw, got {fmt!r}")
    return load_snapshots(source, fmt=_FILE_FORMATS[fmt])


def _load_weights(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        toks = fh.read().replace(",", " ").split()
    return np.array([float(t) for t in toks])


def _parse_select(text: str) -> tuple[int, ...]:
    try:
        indices = tuple(int(tok) for tok in str(text).split(",") if tok.strip())
    except ValueError as exc:
        raise UsageError(f"--select: {exc}") from None
    if not indices:
        raise UsageError("--select needs at least one index")
    return indices


# -- shared output helpers ---------------------------------------------------


def _write_eigenvalue_rows(rows: list[tuple], out_dir: str) -> None:
    with open(os.path.join(out_dir, "eigenvalues.csv"), "w", encoding="ascii") as fh:
        fh.write("method,index,real,imag,modulus,spurious\n")
        for method, idx, lam, spurious in rows:
            fh.write(
                "%s,%d,%.17g,%.17g,%.17g,%d\n"
                % (method, idx, lam.real, lam.imag, abs(lam), spurious)
            )


def _write_complex_csv(M: np.ndarray, path) -> None:
    M = np.atleast_2d(M)
    with open(path, "w", encoding="ascii") as fh:
        for row in M:
            if np.iscomplexobj(M):
                fh.write(",".join("%.17g%+.17gj" % (v.real, v.imag) for v in row))
            else:
                fh.write(",".join("%.17g" % v for v in row))
            fh.write("\n")


def _summary_payload(summary: dict, rank: int) -> dict:
    return {
        "rank": int(rank),
        "eigenvalues": [[v.real, v.imag] for v in summary["eigenvalues"]],
        "max_reconstruction_error": summary["max_reconstruction_error"],
        "max_consistency_residual": summary["max_consistency_residual"],
        "condition_numbers": {
            "kappa_psi_x": summary["kappa_psi_x"],
            "kappa_eigvec": summary["kappa_eigvec"],
        },
    }


# -- commands ----------------------------------------------------------------


def cmd_analyze(config: dict) -> int:
    kernel = _kernel_from(config)
    schur_kind = _schur_kind_from(config)
    methods = _methods_from(config)
    Z = _load_input(config)
    out_dir = _out_dir(config)
    _echo_config(config, out_dir)
    data = pairs_from_trajectory(Z)
    eig_rows: list[tuple] = []
    metrics: dict = {}
    select_model = None
    for method in methods:
        model = fit_method(method, data, kernel, tol=config["tol"], schur_kind=schur_kind)
        summary = model_summary(model)
        spurious = getattr(model, "spurious", None)
        for idx, lam in enumerate(summary["eigenvalues"]):
            flagged = bool(spurious[idx]) if spurious is not None else False
            eig_rows.append((method, idx, lam, flagged))
        metrics[method] = _summary_payload(summary, model.rank if hasattr(model, "rank") else model.svd.rank)
        if method in SCHUR_METHODS:
            if select_model is None:
                select_model = model
            if config["factors"]:
                _write_complex_csv(model.schur.T, os.path.join(out_dir, f"{method}_T.csv"))
                _write_complex_csv(model.zeta_x, os.path.join(out_dir, f"{method}_zeta_x.csv"))
                _write_complex_csv(model.xi, os.path.join(out_dir, f"{method}_xi.csv"))
    _write_eigenvalue_rows(eig_rows, out_dir)
    if config["select"] is not None:
        if select_model is None:
            raise UsageError("--select needs a Schur method (ks_ssmd or ks_essmd)")
        indices = _parse_select(config["select"])
        omega = _load_weights(config["weights"]) if config["weights"] else None
        fit = subset_reconstruction(select_model, indices=np.array(indices), omega=omega)
        with open(os.path.join(out_dir, "subset.json"), "w", encoding="ascii") as fh:
            json.dump(
                {
                    "indices": [int(i) for i in fit.selected_indices],
                    "coefficients": [[float(v.real), float(v.imag)] for v in fit.coefficients],
                    "residual_fro": float(fit.residual_fro),
                },
                fh,
                indent=1,
            )
            fh.write("\n")
    with open(os.path.join(out_dir, "metrics.json"), "w", encoding="ascii") as fh:
        json.dump(metrics, fh, indent=1)
        fh.write("\n")
    return EXIT_OK


def cmd_stream(config: dict) -> int:
    kernel = _kernel_from(config)
    schur_kind = _schur_kind_from(config)
    methods = _methods_from(config)
    Z = _load_input(config)
    out_dir = _out_dir(config)
    _echo_config(config, out_dir)
    experiment = ExperimentConfig(
        window_width=int(config["window"]),
        horizon=int(config["horizon"]),
        steps=int(config["steps"]),
        methods=methods,
        kernel=kernel,
        tol=config["tol"],
        schur_kind=schur_kind,
        seed=config["seed"],
    )
    metrics = run_sliding_windows(Z, experiment)
    save_metrics(metrics, os.path.join(out_dir, "metrics.json"), fmt="json")
    save_metrics(metrics, os.path.join(out_dir, "metrics.csv"), fmt="csv")
    if config["plots"]:
        eigenvalue_scatter_svg(metrics, os.path.join(out_dir, "eigenvalues.svg"))
        error_curves_svg(
            metrics, os.path.join(out_dir, "errors.svg"), machine_precision_floor(Z)
        )
    return EXIT_OK


def cmd_forecast(config: dict) -> int:
    kernel = _kernel_from(config)
    schur_kind = _schur_kind_from(config)
    methods = _methods_from(config)
    if len(methods) != 1:
        raise UsageError("forecast takes exactly one --method")
    method = methods[0]
    Z = _load_input(config)
    out_dir = _out_dir(config)
    _echo_config(config, out_dir)
    horizon = int(config["horizon"])
    if horizon < 0:
        raise UsageError(f"--horizon must be >= 0, got {horizon}")
    predictions_path = os.path.join(out_dir, "predictions.csv")
    if horizon == 0:
        open(predictions_path, "w", encoding="ascii").close()
        return EXIT_OK
    leading = Z[:, : Z.shape[1] - horizon]
    window = config["window"]
    if window is not None and window < leading.shape[1]:
        leading = leading[:, -window:]
    data = pairs_from_trajectory(leading)
    model = fit_method(method, data, kernel, tol=config["tol"], schur_kind=schur_kind)
    x_last = leading[:, -1]
    if method in SCHUR_METHODS:
        pred = forecast(model, x_last, horizon)
    else:
        pred = diag_forecast(model, x_last, horizon)
    save_snapshots(np.real(pred), predictions_path, fmt="csv")
    truth = Z[:, Z.shape[1] - horizon :]
    errors = []
    for k in range(horizon):
        scale = np.linalg.norm(truth[:, k]) or 1.0
        errors.append(float(np.linalg.norm(np.real(pred[:, k]) - truth[:, k]) / scale))
    with open(os.path.join(out_dir, "errors.csv"), "w", encoding="ascii") as fh:
        fh.write("lead,relative_error\n")
        for k, err in enumerate(errors, start=1):
            fh.write("%d,%.17g\n" % (k, err))
    with open(os.path.join(out_dir, "metrics.json"), "w", encoding="ascii") as fh:
        json.dump({"method": method, "horizon": horizon, "max_relative_error": max(errors)}, fh, indent=1)
        fh.write("\n")
    return EXIT_OK


def cmd_compare(config: dict) -> int:
    kernel = _kernel_from(config)
    schur_kind = _schur_kind_from(config)
    Z = _load_input(config)
    out_dir = _out_dir(config)
    _echo_config(config, out_dir)
    data = pairs_from_trajectory(Z)
    rows = []
    for method in METHODS:
        model = fit_method(method, data, kernel, tol=config["tol"], schur_kind=schur_kind)
        summary = model_summary(model)
        rank = model.rank if hasattr(model, "rank") else model.svd.rank
        rows.append((method, rank, summary))
    with open(os.path.join(out_dir, "compare.csv"), "w", encoding="ascii") as fh:
        fh.write(
            "method,rank,kappa_psi_x,kappa_eigvec,max_reconstruction_error,"
            "max_consistency_residual,eigenvalues\n"
        )
        for method, rank, s in rows:
            consist = "" if s["max_consistency_residual"] is None else "%.17g" % s["max_consistency_residual"]
            eig_text = ";".join("(%.17g,%.17g)" % (v.real, v.imag) for v in s["eigenvalues"])
            fh.write(
                '%s,%d,%.17g,%.17g,%.17g,%s,"%s"\n'
                % (method, rank, s["kappa_psi_x"], s["kappa_eigvec"],
                   s["max_reconstruction_error"], consist, eig_text)
            )
    headers = ("method", "rank", "kappa_psi_x", "kappa_eigvec", "max_recon", "max_consist")
    table = [headers]
    for method, rank, s in rows:
        consist = "-" if s["max_consistency_residual"] is None else "%.3e" % s["max_consistency_residual"]
        table.append(
            (
                method,
                str(rank),
                "%.3e" % s["kappa_psi_x"],
                "%.3e" % s["kappa_eigvec"],
                "%.3e" % s["max_reconstruction_error"],
                consist,
            )
        )
    widths = [max(len(row[c]) for row in table) for c in range(len(headers))]
    with open(os.path.join(out_dir, "compare.txt"), "w", encoding="ascii") as fh:
        for row in table:
            fh.write("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip())
            fh.write("\n")
    return EXIT_OK


def cmd_synth(config: dict) -> int:
    source = config["input"]
    if source is None or not str(source).startswith("synth:"):
        raise UsageError("synth requires --input synth:kind[,key=value...]")
    fmt = config["format"]
    if fmt not in _FILE_FORMATS:
        raise UsageError(f"--format must be csv or raw, got {fmt!r}")
    Z = _load_input(config)
    out_dir = _out_dir(config)
    _echo_config(config, out_dir)
    name = "data.csv" if fmt == "csv" else "data.raw"
    save_snapshots(Z, os.path.join(out_dir, name), fmt=_FILE_FORMATS[fmt])
    return EXIT_OK


_COMMANDS = {
    "analyze": cmd_analyze,
    "stream": cmd_stream,
    "forecast": cmd_forecast,
    "compare": cmd_compare,
    "synth": cmd_synth,
}


# -- argument parsing ---------------------------------------------------------


def _add_common(p: _Parser, *names: str) -> None:
    if "input" in names:
        p.add_argument("--input", help="data file path or synth:kind,key=value,... spec")
    if "format" in names:
        p.add_argument("--format", choices=("csv", "raw"), help="snapshot file format")
    if "kernel" in names:
        p.add_argument("--kernel", choices=("linear", "gaussian"))
        p.add_argument("--sigma", type=float, help="gaussian kernel width")
    if "tol" in names:
        p.add_argument("--tol", type=float, help="singular value truncation tolerance")
    if "window" in names:
        p.add_argument("--window", type=int, help="window width in snapshots")
    if "horizon" in names:
        p.add_argument("--horizon", type=int, help="forecast leads per window")
    if "steps" in names:
        p.add_argument("--steps", type=int, help="number of sliding-window steps")
    if "method" in names:
        p.add_argument("--method", help="comma-separated subset of " + ",".join(METHODS))
    if "schur" in names:
        p.add_argument("--schur", choices=("auto", "complex", "real"), help="Schur arithmetic")
    if "out" in names:
        p.add_argument("--out", help="output directory (created if missing)")
    if "seed" in names:
        p.add_argument("--seed", type=int, help="generator seed")
    if "config" in names:
        p.add_argument("--config", help="JSON file of option defaults")


def build_parser() -> _Parser:
    parser = _Parser(prog="ksmd", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="fit model(s) on the whole dataset")
    _add_common(p, "input", "format", "kernel", "tol", "method", "schur", "out", "seed", "config")
    p.add_argument("--select", help="comma-separated eigenvalue indices for subset reconstruction")
    p.add_argument("--weights", help="file of positive snapshot weights for --select")
    p.add_argument("--factors", action="store_const", const=True,
                   help="also write T, zeta_x and xi factors")

    p = sub.add_parser("stream", help="sliding-window experiment")
    _add_common(p, "input", "format", "kernel", "tol", "window", "horizon", "steps",
                "method", "schur", "out", "seed", "config")
    p.add_argument("--plots", action="store_const", const=True, help="emit SVG charts")

    p = sub.add_parser("forecast", help="hold out the trailing snapshots and predict them")
    _add_common(p, "input", "format", "kernel", "tol", "window", "horizon",
                "method", "schur", "out", "seed", "config")

    p = sub.add_parser("compare", help="run all four methods side by side")
    _add_common(p, "input", "format", "kernel", "tol", "schur", "out", "seed", "config")

    p = sub.add_parser("synth", help="write a synthetic trajectory to a data file")
    _add_common(p, "input", "format", "out", "seed", "config")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = _merge_config(args)
        return _COMMANDS[args.command](config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
