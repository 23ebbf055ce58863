"""Snapshot file formats.

csv: plain text, one time sample per row, so a file row is a snapshot and
the loader transposes into the column-snapshot convention used everywhere
else.  Values are written with %.17g, which round-trips binary64.

raw_f64: 16-byte header of two little-endian uint64 (rows, cols) followed by
the matrix payload as column-major little-endian float64.  The payload is
already in the library convention, so no transpose happens on either side.
"""

from __future__ import annotations

import struct

import numpy as np

from ..exceptions import ParseError

__all__ = ["FORMATS", "load_snapshots", "load_trajectories", "save_snapshots"]

FORMATS = ("csv", "raw_f64")

_HEADER = struct.Struct("<QQ")


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ParseError(f"unknown snapshot format {fmt!r}; expected one of {FORMATS}")


def _parse_csv_rows(lines) -> list[list[float]]:
    rows: list[list[float]] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            row = [float(tok) for tok in stripped.split(",")]
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        if rows and len(row) != len(rows[0]):
            raise ParseError(
                f"line {lineno}: expected {len(rows[0])} fields, got {len(row)}"
            )
        rows.append(row)
    return rows


def _rows_to_matrix(rows: list[list[float]]) -> np.ndarray:
    if not rows:
        raise ParseError("file contains no data rows")
    # rows are time samples; snapshots are columns
    return np.array(rows, dtype=np.float64).T


def load_snapshots(path, fmt: str = "csv") -> np.ndarray:
    """Read one snapshot matrix (n x M, columns are snapshots)."""
    _check_format(fmt)
    if fmt == "csv":
        with open(path, "r", encoding="ascii") as fh:
            return _rows_to_matrix(_parse_csv_rows(fh))
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise ParseError(f"raw_f64 file is {len(blob)} bytes; header needs {_HEADER.size}")
    rows, cols = _HEADER.unpack_from(blob)
    expected = _HEADER.size + 8 * rows * cols
    if len(blob) != expected:
        raise ParseError(
            f"raw_f64 payload mismatch: header says {rows}x{cols} "
            f"({expected} bytes total), file has {len(blob)}"
        )
    flat = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size)
    return flat.reshape((rows, cols), order="F").copy()


def load_trajectories(path) -> list[np.ndarray]:
    """Read a csv file holding several trajectories separated by blank lines."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    blocks: list[np.ndarray] = []
    current: list[str] = []
    start = 1
    for lineno, line in enumerate(lines + [""], start=1):
        if line.strip():
            if not current:
                start = lineno
            current.append(line)
            continue
        if current:
            try:
                blocks.append(_rows_to_matrix(_parse_csv_rows(current)))
            except ParseError as exc:
                raise ParseError(f"block starting at line {start}: {exc}") from None
            current = []
    if not blocks:
        raise ParseError("file contains no data rows")
    return blocks


def save_snapshots(Z: np.ndarray, path, fmt: str = "csv") -> None:
    _check_format(fmt)
    Z = np.asarray(Z)
    if Z.ndim != 2:
        raise ParseError(f"snapshot matrix must be 2-d, got shape {Z.shape}")
    if np.iscomplexobj(Z):
        raise ParseError("snapshot files hold real data")
    Z = Z.astype(np.float64, copy=False)
    if fmt == "csv":
        with open(path, "w", encoding="ascii") as fh:
            for row in Z.T:
                fh.write(",".join("%.17g" % v for v in row))
                fh.write("\n")
        return
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(Z.shape[0], Z.shape[1]))
        fh.write(np.asfortranarray(Z).tobytes(order="F"))
