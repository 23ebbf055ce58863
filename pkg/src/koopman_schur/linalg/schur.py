"""Dense Schur decomposition, implemented from scratch.

Pipeline: Householder reduction to Hessenberg form, then a shifted QR
iteration on the Hessenberg matrix.  Real input takes the Francis implicit
double-shift path and yields the real form (orthogonal Q, quasi-triangular T
with 1x1/2x2 diagonal blocks, conjugate pairs inside the 2x2 blocks).
Complex input takes a Wilkinson single-shift path with complex Givens
rotations.  A subdiagonal entry deflates when

    |h[i+1, i]| <= eps * (|h[i, i]| + |h[i+1, i+1]|)

and the iteration gives up after 40*r sweeps in total.  Exceptional ad-hoc
shifts are injected every 10 stalled sweeps on the same trailing position so
that shift-invariant cases (e.g. nilpotent shift matrices) cannot cycle.

Transformations are applied to full row/column ranges.  Entries outside the
active window are exact zeros in Hessenberg form, so the extra work changes
nothing and removes a whole class of boundary-index bugs; matrices here are
small (r of order 100 at most in the intended workloads).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._validation import EPS, as_dense, frozen, require_square
from ..exceptions import ConvergenceError

__all__ = ["SchurForm", "schur_decompose", "diagonal_blocks"]


@dataclass(frozen=True)
class SchurForm:
    """Unitary (or real orthogonal) Q and (quasi-)upper-triangular T.

    ``eigenvalues`` lists the diagonal eigenvalues in storage order; for the
    real form, each 2x2 block contributes its conjugate pair with the
    positive-imaginary member first.
    """

    Q: np.ndarray
    T: np.ndarray
    eigenvalues: np.ndarray
    kind: str  # "complex" | "real"

    def __post_init__(self):
        object.__setattr__(self, "Q", frozen(self.Q))
        object.__setattr__(self, "T", frozen(self.T))
        object.__setattr__(self, "eigenvalues", frozen(self.eigenvalues))

    @property
    def rank(self) -> int:
        return self.T.shape[0]


def schur_decompose(A, kind: str = "auto", max_sweeps: int | None = None) -> SchurForm:
    """Schur decomposition A = Q T Q*.

    kind "auto" picks the real form for real-valued input and the complex
    form otherwise; "complex" forces complex arithmetic on any input;
    "real" demands real-valued input.
    """
    A = require_square(as_dense(A, "A"), "A")
    real_valued = not np.iscomplexobj(A) or not np.any(A.imag)
    if kind == "auto":
        kind = "real" if real_valued else "complex"
    if kind == "real":
        if not real_valued:
            raise ValueError("real Schur form requires real-valued input")
        A = A.real if np.iscomplexobj(A) else A
        return _schur_real(np.array(A, dtype=np.float64), max_sweeps)
    if kind == "complex":
        return _schur_complex(np.array(A, dtype=np.complex128), max_sweeps)
    raise ValueError(f"unknown Schur kind {kind!r}")


def diagonal_blocks(T: np.ndarray) -> list[tuple[int, int]]:
    """(start, size) spans of the diagonal blocks of a (quasi-)triangular T."""
    blocks = []
    r = T.shape[0]
    k = 0
    while k < r:
        if k + 1 < r and T[k + 1, k] != 0.0:
            blocks.append((k, 2))
            k += 2
        else:
            blocks.append((k, 1))
            k += 1
    return blocks


# -- Hessenberg reduction -----------------------------------------------------


def _householder_vector(x: np.ndarray) -> tuple[np.ndarray, float]:
    """v, beta with (I - beta v v*) x = alpha e1 and |alpha| = ||x||."""
    normx = np.linalg.norm(x)
    v = x.astype(x.dtype, copy=True)
    if normx == 0.0:
        return v, 0.0
    x0 = x[0]
    if np.iscomplexobj(x):
        phase = x0 / abs(x0) if x0 != 0.0 else 1.0 + 0.0j
    else:
        phase = 1.0 if x0 >= 0.0 else -1.0
    v[0] += phase * normx
    vnorm2 = np.real(np.vdot(v, v))
    if vnorm2 == 0.0:
        return v, 0.0
    return v, 2.0 / vnorm2


def _hessenberg(H: np.ndarray, Q: np.ndarray) -> None:
    """In-place reduction to upper Hessenberg form, accumulating Q."""
    n = H.shape[0]
    for k in range(n - 2):
        v, beta = _householder_vector(H[k + 1 :, k].copy())
        if beta == 0.0:
            continue
        # similarity (I - beta v v*) H (I - beta v v*)
        H[k + 1 :, k:] -= beta * np.outer(v, v.conj() @ H[k + 1 :, k:])
        H[:, k + 1 :] -= beta * np.outer(H[:, k + 1 :] @ v, v.conj())
        Q[:, k + 1 :] -= beta * np.outer(Q[:, k + 1 :] @ v, v.conj())
        H[k + 2 :, k] = 0.0


# -- complex form: Wilkinson single shift -------------------------------------


def _complex_givens(a: complex, b: complex) -> tuple[float, complex]:
    """c (real), s with [[c, s], [-conj(s), c]] @ (a, b) = (r, 0)."""
    if b == 0.0:
        return 1.0, 0.0 + 0.0j
    if a == 0.0:
        return 0.0, np.conj(b) / abs(b)
    na = abs(a)
    r = np.hypot(na, abs(b))
    return na / r, (a / na) * np.conj(b) / r


def _apply_givens(H: np.ndarray, Q: np.ndarray, k: int, c: float, s: complex) -> None:
    """Similarity by the Givens rotation acting on coordinates (k, k+1)."""
    rk, rk1 = H[k, :].copy(), H[k + 1, :].copy()
    H[k, :] = c * rk + s * rk1
    H[k + 1, :] = -np.conj(s) * rk + c * rk1
    ck, ck1 = H[:, k].copy(), H[:, k + 1].copy()
    H[:, k] = c * ck + np.conj(s) * ck1
    H[:, k + 1] = -s * ck + c * ck1
    qk, qk1 = Q[:, k].copy(), Q[:, k + 1].copy()
    Q[:, k] = c * qk + np.conj(s) * qk1
    Q[:, k + 1] = -s * qk + c * qk1


def _wilkinson_shift(H: np.ndarray, hi: int) -> complex:
    """Eigenvalue of the trailing 2x2 closest to the corner entry."""
    a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
    c, d = H[hi, hi - 1], H[hi, hi]
    mid = 0.5 * (a + d)
    disc = np.sqrt(mid * mid - (a * d - b * c) + 0j)
    lam1, lam2 = mid + disc, mid - disc
    return lam1 if abs(lam1 - d) <= abs(lam2 - d) else lam2


def _deflate_subdiagonal(H: np.ndarray, hi: int) -> None:
    for i in range(hi):
        if H[i + 1, i] != 0.0 and abs(H[i + 1, i]) <= EPS * (
            abs(H[i, i]) + abs(H[i + 1, i + 1])
        ):
            H[i + 1, i] = 0.0


def _schur_complex(A: np.ndarray, max_sweeps: int | None) -> SchurForm:
    n = A.shape[0]
    budget = 40 * n if max_sweeps is None else max_sweeps
    H = A.copy()
    Q = np.eye(n, dtype=np.complex128)
    if n > 2:
        _hessenberg(H, Q)
    sweeps = 0
    stalled = 0
    hi = n - 1
    while hi > 0:
        _deflate_subdiagonal(H, hi)
        if H[hi, hi - 1] == 0.0:
            hi -= 1
            stalled = 0
            continue
        lo = hi
        while lo > 0 and H[lo, lo - 1] != 0.0:
            lo -= 1
        if sweeps >= budget:
            raise ConvergenceError(
                f"complex QR iteration exceeded {budget} sweeps (40*r budget)"
            )
        sweeps += 1
        stalled += 1
        if stalled % 10 == 0:
            # ad-hoc exceptional shift to break shift-invariant cycles
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1])
        else:
            mu = _wilkinson_shift(H, hi)
        x, y = H[lo, lo] - mu, H[lo + 1, lo]
        for k in range(lo, hi):
            c, s = _complex_givens(x, y)
            _apply_givens(H, Q, k, c, s)
            if k > lo:
                H[k + 1, k - 1] = 0.0
            if k < hi - 1:
                x, y = H[k + 1, k], H[k + 2, k]
    T = np.triu(H)
    return SchurForm(Q=Q, T=T, eigenvalues=np.diag(T).astype(np.complex128), kind="complex")


# -- real form: Francis implicit double shift ---------------------------------


def _apply_reflector_similarity(
    H: np.ndarray, Q: np.ndarray, k: int, v: np.ndarray, beta: float
) -> None:
    j = k + v.shape[0]
    H[k:j, :] -= beta * np.outer(v, v @ H[k:j, :])
    H[:, k:j] -= beta * np.outer(H[:, k:j] @ v, v)
    Q[:, k:j] -= beta * np.outer(Q[:, k:j] @ v, v)


def _equalizing_rotation(M: np.ndarray) -> tuple[float, float]:
    """Rotation angle that equalizes the diagonal of a 2x2 block."""
    if M[0, 0] == M[1, 1]:
        return 1.0, 0.0
    tau = (M[0, 1] + M[1, 0]) / (M[0, 0] - M[1, 1])
    off = np.hypot(tau, 1.0)
    cand = (tau - off, tau + off)
    t = cand[0] if abs(cand[0]) <= abs(cand[1]) else cand[1]
    c = 1.0 / np.hypot(t, 1.0)
    return c, t * c


def _rotate_block(T: np.ndarray, Q: np.ndarray, k: int, c: float, s: float) -> None:
    """Real similarity by G = [[c, -s], [s, c]] on coordinates (k, k+1)."""
    rk, rk1 = T[k, :].copy(), T[k + 1, :].copy()
    T[k, :] = c * rk + s * rk1
    T[k + 1, :] = -s * rk + c * rk1
    ck, ck1 = T[:, k].copy(), T[:, k + 1].copy()
    T[:, k] = c * ck + s * ck1
    T[:, k + 1] = -s * ck + c * ck1
    qk, qk1 = Q[:, k].copy(), Q[:, k + 1].copy()
    Q[:, k] = c * qk + s * qk1
    Q[:, k + 1] = -s * qk + c * qk1


def _standardize_2x2(T: np.ndarray, Q: np.ndarray, k: int) -> None:
    """Bring the 2x2 block at (k, k) to standard form.

    Real eigenvalues: split into two 1x1 blocks (subdiagonal exactly zero).
    Complex pair: equal diagonal entries and opposite-sign off-diagonals.
    """
    if T[k + 1, k] == 0.0:
        return
    a, b = T[k, k], T[k, k + 1]
    c, d = T[k + 1, k], T[k + 1, k + 1]
    disc = 0.25 * (a - d) ** 2 + b * c
    if disc >= 0.0:
        # real eigenvalues: rotate an eigenvector into the leading position
        mid = 0.5 * (a + d)
        lam = mid + np.copysign(np.sqrt(disc), mid)
        v1 = np.array([b, lam - a])
        v2 = np.array([lam - d, c])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        nv = np.linalg.norm(v)
        if nv == 0.0:
            T[k + 1, k] = 0.0
            return
        _rotate_block(T, Q, k, v[0] / nv, v[1] / nv)
        T[k + 1, k] = 0.0
    else:
        cg, sg = _equalizing_rotation(T[k : k + 2, k : k + 2])
        if sg != 0.0:
            _rotate_block(T, Q, k, cg, sg)
        # exact equality on the diagonal keeps the pair readable as
        # t11 +- i sqrt(-t12 t21)
        mean = 0.5 * (T[k, k] + T[k + 1, k + 1])
        T[k, k] = T[k + 1, k + 1] = mean


def _francis_sweep(H: np.ndarray, Q: np.ndarray, lo: int, hi: int, stalled: int) -> None:
    if stalled > 0 and stalled % 10 == 0:
        # LAPACK-style exceptional shift pair
        s1 = 0.75 * abs(H[hi, hi - 1]) + H[hi, hi]
        ssum = 2.0 * s1
        sprod = s1 * s1 + 0.4375 * (abs(H[hi, hi - 1]) + abs(H[hi - 1, hi - 2])) ** 2
    else:
        ssum = H[hi - 1, hi - 1] + H[hi, hi]
        sprod = H[hi - 1, hi - 1] * H[hi, hi] - H[hi - 1, hi] * H[hi, hi - 1]
    h00, h01 = H[lo, lo], H[lo, lo + 1]
    h10, h11 = H[lo + 1, lo], H[lo + 1, lo + 1]
    h21 = H[lo + 2, lo + 1]
    x = h00 * h00 + h01 * h10 - ssum * h00 + sprod
    y = h10 * (h00 + h11 - ssum)
    z = h10 * h21
    for k in range(lo, hi - 1):
        size = 3 if k + 2 <= hi else 2
        v, beta = _householder_vector(np.array([x, y, z][:size]))
        if beta != 0.0:
            _apply_reflector_similarity(H, Q, k, v, beta)
        if k > lo:
            H[k + 1, k - 1] = 0.0
            H[k + 2, k - 1] = 0.0
        if k < hi - 2:
            x, y, z = H[k + 1, k], H[k + 2, k], H[k + 3, k]
    # final rotation restores Hessenberg form in column hi-2
    v, beta = _householder_vector(np.array([H[hi - 1, hi - 2], H[hi, hi - 2]]))
    if beta != 0.0:
        _apply_reflector_similarity(H, Q, hi - 1, v, beta)
    H[hi, hi - 2] = 0.0


def _schur_real(A: np.ndarray, max_sweeps: int | None) -> SchurForm:
    n = A.shape[0]
    budget = 40 * n if max_sweeps is None else max_sweeps
    H = A.copy()
    Q = np.eye(n, dtype=np.float64)
    if n > 2:
        _hessenberg(H, Q)
    sweeps = 0
    stalled = 0
    hi = n - 1
    while hi > 0:
        _deflate_subdiagonal(H, hi)
        if H[hi, hi - 1] == 0.0:
            hi -= 1
            stalled = 0
            continue
        lo = hi
        while lo > 0 and H[lo, lo - 1] != 0.0:
            lo -= 1
        if lo == hi - 1:
            # trailing 2x2: accept as a block (complex pair) or split it
            _standardize_2x2(H, Q, lo)
            hi = lo - 1
            stalled = 0
            continue
        if sweeps >= budget:
            raise ConvergenceError(
                f"Francis QR iteration exceeded {budget} sweeps (40*r budget)"
            )
        sweeps += 1
        stalled += 1
        _francis_sweep(H, Q, lo, hi, stalled)
    _zero_below_blocks(H)
    for start, size in diagonal_blocks(H):
        if size == 2:
            _standardize_2x2(H, Q, start)
    _zero_below_blocks(H)
    eigs = _eigenvalues_from_quasi_triangular(H)
    return SchurForm(Q=Q, T=H, eigenvalues=eigs, kind="real")


def _zero_below_blocks(T: np.ndarray) -> None:
    """Exact zeros everywhere below the 1x1/2x2 block diagonal."""
    n = T.shape[0]
    kept = {start + 1 for start, size in diagonal_blocks(T) if size == 2}
    for i in range(1, n):
        T[i, : i - 1] = 0.0
        if i not in kept:
            T[i, i - 1] = 0.0


def _eigenvalues_from_quasi_triangular(T: np.ndarray) -> np.ndarray:
    eigs = np.empty(T.shape[0], dtype=np.complex128)
    for start, size in diagonal_blocks(T):
        if size == 1:
            eigs[start] = T[start, start]
        else:
            p = T[start, start]
            prod = T[start, start + 1] * T[start + 1, start]
            im = np.sqrt(max(-prod, 0.0))
            eigs[start] = p + 1j * im
            eigs[start + 1] = p - 1j * im
    return eigs
