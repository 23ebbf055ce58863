"""Reordering of Schur forms by orthogonal/unitary similarity.

Selected eigenvalues are bubbled to the leading positions with swaps of
adjacent diagonal blocks, Bai-Demmel style.  Adjacent 1x1 blocks swap with a
single rotation built from an eigenvector of the trailing eigenvalue, which
cannot fail: a zero eigenvector signals an (numerically) equal pair and the
swap degenerates to a no-op.  Swaps involving a 2x2 block solve a small
Sylvester equation through its Kronecker form and orthogonalize [ -X ; I ];
those can fail, and raise IllConditionedSwapError when the system is singular
to working precision or the swapped form does not stay block triangular.

Indices here are 0-based.  In the real form, selecting either member of a
conjugate pair drags the whole 2x2 block, so the leading span may exceed the
number of selected indices.
"""

from __future__ import annotations

import numpy as np

from .._validation import EPS
from ..exceptions import IllConditionedSwapError, IndexOutOfRangeError
from .schur import (
    SchurForm,
    _eigenvalues_from_quasi_triangular,
    _standardize_2x2,
    diagonal_blocks,
)

__all__ = ["reorder_schur", "modulus_descending_order", "leading_span"]


def modulus_descending_order(eigenvalues: np.ndarray) -> np.ndarray:
    """Stable ordering by descending |lambda|, ties by Re then Im descending."""
    lam = np.asarray(eigenvalues)
    keys = [(-abs(l), -l.real, -l.imag, i) for i, l in enumerate(lam)]
    return np.array([i for *_, i in sorted(keys)], dtype=np.intp)


def leading_span(form: SchurForm, selected) -> int:
    """Size of the leading block span covering the selected indices.

    For the complex form this is just the number of distinct indices; the
    real form rounds up to whole 2x2 blocks.
    """
    blocks = diagonal_blocks(form.T)
    chosen = _selected_blocks(blocks, selected, form.rank)
    return sum(blocks[b][1] for b in chosen)


def reorder_schur(form: SchurForm, selected) -> tuple[SchurForm, np.ndarray]:
    """Move the selected eigenvalues to the leading diagonal positions.

    Returns the reordered form and the accumulated similarity Theta with
    T_new = Theta* T Theta and Q_new = Q Theta.  Selection order is
    preserved: the block holding selected[0] ends up first.
    """
    r = form.rank
    T = np.array(form.T)
    complex_form = form.kind == "complex"
    Theta = np.eye(r, dtype=T.dtype)
    blocks = list(diagonal_blocks(T))
    chosen = _selected_blocks(blocks, selected, r)

    # current block order; entries are original block ids
    order = list(range(len(blocks)))
    sizes = [s for _, s in blocks]
    for target_pos, block_id in enumerate(chosen):
        pos = order.index(block_id)
        for j in range(pos, target_pos, -1):
            # swap blocks at list positions j-1, j
            left_id, right_id = order[j - 1], order[j]
            off = sum(sizes[order[i]] for i in range(j - 1))
            p, q = sizes[left_id], sizes[right_id]
            _swap_adjacent(T, Theta, off, p, q, complex_form)
            order[j - 1], order[j] = right_id, left_id

    eigs = (
        np.diag(T).astype(np.complex128)
        if complex_form
        else _eigenvalues_from_quasi_triangular(T)
    )
    reordered = SchurForm(Q=form.Q @ Theta, T=T, eigenvalues=eigs, kind=form.kind)
    return reordered, Theta


def _selected_blocks(blocks, selected, r) -> list[int]:
    sel = [int(i) for i in np.atleast_1d(np.asarray(selected, dtype=np.intp)).ravel()]
    if len(set(sel)) != len(sel):
        raise ValueError(f"duplicate indices in selection {sel}")
    owner = np.empty(r, dtype=np.intp)
    for b, (start, size) in enumerate(blocks):
        owner[start : start + size] = b
    chosen: list[int] = []
    for i in sel:
        if not 0 <= i < r:
            raise IndexOutOfRangeError(f"eigenvalue index {i} out of range [0, {r})")
        b = int(owner[i])
        if b not in chosen:  # both members of a pair name the same block
            chosen.append(b)
    return chosen


def _swap_adjacent(
    T: np.ndarray, Theta: np.ndarray, off: int, p: int, q: int, complex_form: bool
) -> None:
    if p == 1 and q == 1:
        _swap_11(T, Theta, off, complex_form)
        return
    _swap_blocks(T, Theta, off, p, q)


def _swap_11(T: np.ndarray, Theta: np.ndarray, off: int, complex_form: bool) -> None:
    k = off
    v0 = T[k, k + 1]
    v1 = T[k + 1, k + 1] - T[k, k]
    nv = np.hypot(abs(v0), abs(v1))
    if nv == 0.0:
        return  # equal eigenvalues and zero coupling: already interchangeable
    c0, c1 = v0 / nv, v1 / nv
    if complex_form:
        G = np.array([[c0, -np.conj(c1)], [c1, np.conj(c0)]], dtype=np.complex128)
    else:
        G = np.array([[c0, -c1], [c1, c0]], dtype=np.float64)
    T[k : k + 2, :] = G.conj().T @ T[k : k + 2, :]
    T[:, k : k + 2] = T[:, k : k + 2] @ G
    Theta[:, k : k + 2] = Theta[:, k : k + 2] @ G
    T[k + 1, k] = 0.0


def _swap_blocks(T: np.ndarray, Theta: np.ndarray, off: int, p: int, q: int) -> None:
    """Swap adjacent real blocks via the Sylvester system A11 X - X A22 = A12."""
    end = off + p + q
    A11 = T[off : off + p, off : off + p]
    A22 = T[off + p : end, off + p : end]
    A12 = T[off : off + p, off + p : end]
    lam1 = _eigenvalues_from_quasi_triangular(np.array(A11))
    lam2 = _eigenvalues_from_quasi_triangular(np.array(A22))
    K = np.kron(np.eye(q), A11) - np.kron(A22.T, np.eye(p))
    sing = np.linalg.svd(K, compute_uv=False)
    if sing[-1] <= 64.0 * EPS * max(sing[0], 1.0):
        raise IllConditionedSwapError(
            f"cannot swap blocks with eigenvalues {lam1} and {lam2}: "
            "Sylvester system is singular to working precision"
        )
    X = np.linalg.solve(K, A12.flatten(order="F")).reshape((p, q), order="F")
    G, _ = np.linalg.qr(np.vstack([-X, np.eye(q)]), mode="complete")
    tnorm = np.linalg.norm(T)
    T[off:end, :] = G.T @ T[off:end, :]
    T[:, off:end] = T[:, off:end] @ G
    Theta[:, off:end] = Theta[:, off:end] @ G
    resid = np.linalg.norm(T[off + q : end, off : off + q])
    if resid > 64.0 * EPS * max(p + q, 8) * max(tnorm, 1.0):
        raise IllConditionedSwapError(
            f"swap of blocks with eigenvalues {lam1} and {lam2} lost block "
            f"triangularity (residual {resid:.3e})"
        )
    T[off + q : end, off : off + q] = 0.0
    if q == 2:
        _standardize_2x2(T, Theta, off)
    if p == 2:
        _standardize_2x2(T, Theta, off + q)