"""Self-contained SVG charts for window metrics.

No plotting dependency: the two charts needed here (eigenvalue scatter on
the unit circle, error-vs-step curves on a log axis) are simple enough to
emit directly.  Output is deterministic for a fixed metrics list.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .experiment import WindowMetrics

__all__ = ["eigenvalue_scatter_svg", "error_curves_svg"]

_PALETTE = {
    "dmd": "#1f77b4",
    "edmd": "#2ca02c",
    "ks_ssmd": "#d62728",
    "ks_essmd": "#9467bd",
}
_FALLBACK_COLOR = "#7f7f7f"
_REFERENCE_COLOR = "#e3c000"  # machine-precision line

_W, _H = 640, 480
_MARGIN = 56


def _color(method: str) -> str:
    return _PALETTE.get(method, _FALLBACK_COLOR)


def _document(body: list[str], title: str) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="#ffffff"/>',
        f'<text x="{_W / 2:g}" y="24" font-family="sans-serif" font-size="15" '
        f'text-anchor="middle">{escape(title)}</text>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def _legend(methods: list[str], extra: list[tuple[str, str]] | None = None) -> list[str]:
    items = [(m, _color(m)) for m in methods] + list(extra or [])
    out = []
    y = 40
    for label, color in items:
        out.append(f'<rect x="{_W - 150}" y="{y - 9}" width="12" height="12" fill="{color}"/>')
        out.append(
            f'<text x="{_W - 132}" y="{y + 2}" font-family="sans-serif" '
            f'font-size="12">{escape(label)}</text>'
        )
        y += 18
    return out


def _methods_in(metrics: list[WindowMetrics]) -> list[str]:
    seen: list[str] = []
    for wm in metrics:
        for name in wm.per_method:
            if name not in seen:
                seen.append(name)
    return seen


def eigenvalue_scatter_svg(metrics: list[WindowMetrics], path) -> None:
    """All window eigenvalues in the complex plane, with the unit circle."""
    pts: list[tuple[float, float, str]] = []
    for wm in metrics:
        for name, mm in wm.per_method.items():
            if mm.failed:
                continue
            for v in mm.eigenvalues:
                pts.append((v.real, v.imag, _color(name)))
    span = 1.1
    for re, im, _ in pts:
        span = max(span, abs(re), abs(im))
    span *= 1.05
    half = min(_W, _H) / 2 - _MARGIN
    cx, cy = _W / 2, _H / 2

    def sx(re: float) -> float:
        return cx + half * re / span

    def sy(im: float) -> float:
        return cy - half * im / span

    body = [
        f'<circle cx="{cx:g}" cy="{cy:g}" r="{half / span:.2f}" fill="none" '
        f'stroke="#999999" stroke-width="1"/>',
        f'<line x1="{cx - half:g}" y1="{cy:g}" x2="{cx + half:g}" y2="{cy:g}" '
        f'stroke="#cccccc" stroke-width="1"/>',
        f'<line x1="{cx:g}" y1="{cy - half:g}" x2="{cx:g}" y2="{cy + half:g}" '
        f'stroke="#cccccc" stroke-width="1"/>',
    ]
    for re, im, color in pts:
        body.append(
            f'<circle cx="{sx(re):.2f}" cy="{sy(im):.2f}" r="2.5" '
            f'fill="{color}" fill-opacity="0.55"/>'
        )
    body += _legend(_methods_in(metrics))
    with open(path, "w", encoding="ascii") as fh:
        fh.write(_document(body, "window eigenvalues"))


def _log_clamp(v: float) -> float:
    return math.log10(max(v, 1e-18))


def error_curves_svg(metrics: list[WindowMetrics], path, floor: float) -> None:
    """Per-method max reconstruction error (solid) and, where present,
    relative consistency residual (dashed) against window step, log scale.
    The horizontal reference line marks the machine-precision floor."""
    series: dict[tuple[str, str], list[tuple[int, float]]] = {}
    for wm in metrics:
        for name, mm in wm.per_method.items():
            if mm.failed:
                continue
            if mm.max_reconstruction_error is not None:
                series.setdefault((name, "recon"), []).append(
                    (wm.step, mm.max_reconstruction_error)
                )
            if mm.max_consistency_residual is not None:
                series.setdefault((name, "consist"), []).append(
                    (wm.step, mm.max_consistency_residual)
                )
    values = [v for pts in series.values() for _, v in pts] + [floor]
    lo = min(_log_clamp(v) for v in values) - 0.5
    hi = max(_log_clamp(v) for v in values) + 0.5
    if hi - lo < 1.0:
        hi = lo + 1.0
    steps = [wm.step for wm in metrics] or [1]
    smin, smax = min(steps), max(steps)
    if smax == smin:
        smax = smin + 1
    x0, x1 = _MARGIN, _W - _MARGIN
    y0, y1 = _H - _MARGIN, _MARGIN + 16

    def sx(s: float) -> float:
        return x0 + (x1 - x0) * (s - smin) / (smax - smin)

    def sy(v: float) -> float:
        return y0 + (y1 - y0) * (_log_clamp(v) - lo) / (hi - lo)

    body = [
        f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
        f'fill="none" stroke="#444444" stroke-width="1"/>'
    ]
    for decade in range(math.ceil(lo), math.floor(hi) + 1):
        y = y0 + (y1 - y0) * (decade - lo) / (hi - lo)
        body.append(
            f'<line x1="{x0}" y1="{y:.2f}" x2="{x1}" y2="{y:.2f}" '
            f'stroke="#eeeeee" stroke-width="1"/>'
        )
        body.append(
            f'<text x="{x0 - 6}" y="{y + 4:.2f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">1e{decade}</text>'
        )
    for s in sorted({smin, smax, (smin + smax) // 2}):
        body.append(
            f'<text x="{sx(s):.2f}" y="{y0 + 16}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{s}</text>'
        )
    fy = sy(floor)
    body.append(
        f'<line x1="{x0}" y1="{fy:.2f}" x2="{x1}" y2="{fy:.2f}" '
        f'stroke="{_REFERENCE_COLOR}" stroke-width="2"/>'
    )
    for (name, kind), pts in sorted(series.items()):
        pts.sort()
        coords = " ".join(f"{sx(s):.2f},{sy(v):.2f}" for s, v in pts)
        dash = ' stroke-dasharray="5,3"' if kind == "consist" else ""
        body.append(
            f'<polyline points="{coords}" fill="none" stroke="{_color(name)}" '
            f'stroke-width="1.5"{dash}/>'
        )
    body += _legend(
        _methods_in(metrics), extra=[("precision floor", _REFERENCE_COLOR)]
    )
    body.append(
        f'<text x="{(x0 + x1) / 2:g}" y="{_H - 12}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">window step</text>'
    )
    with open(path, "w", encoding="ascii") as fh:
        fh.write(_document(body, "error vs window step"))
