"""Schur eigenvalue reordering by adjacent swaps.

Ground truths: the similarity residual against the original matrix, the
diagonal eigenvalue multiset before vs after, and permutation behavior on
diagonal input where swaps reduce to exact exchanges.
"""

import numpy as np
import pytest

from helpers import assert_spectra_match, random_orthogonal
from koopman_schur.exceptions import IndexOutOfRangeError
from koopman_schur.linalg import (
    diagonal_blocks,
    leading_span,
    modulus_descending_order,
    reorder_schur,
    schur_decompose,
)

EPS = np.finfo(np.float64).eps


def reorder_checked(A, form, selected):
    before = np.array(form.eigenvalues)
    new_form, theta = reorder_schur(form, selected)
    r = form.T.shape[0]
    tnorm = max(np.linalg.norm(form.T), 1.0)
    assert np.abs(theta.conj().T @ theta - np.eye(r)).max() <= 64 * EPS * max(r, 8)
    resid = np.linalg.norm(A @ new_form.Q - new_form.Q @ new_form.T)
    assert resid <= 1e-11 * max(np.linalg.norm(A), 1.0) * max(r, 4)
    assert_spectra_match(new_form.eigenvalues, before, 1e-10 * tnorm)
    np.testing.assert_allclose(new_form.Q, form.Q @ theta, atol=1e-13 * max(r, 4))
    return new_form, theta


class TestDiagonalCase:
    def test_select_trailing_eigenvalue(self):
        A = np.diag([3.0, 2.0, 1.0])
        form = schur_decompose(A, kind="complex")
        new_form, theta = reorder_checked(A, form, [2])
        assert new_form.eigenvalues[0] == pytest.approx(1.0)
        assert_spectra_match(new_form.eigenvalues[1:], [3.0, 2.0], 1e-12)

    def test_identity_selection_is_identity(self):
        A = np.diag([3.0, 2.0, 1.0])
        form = schur_decompose(A, kind="complex")
        new_form, theta = reorder_schur(form, [0, 1])
        np.testing.assert_allclose(theta, np.eye(3), atol=1e-14)

    def test_full_permutation(self):
        A = np.diag([1.0, 2.0, 3.0, 4.0])
        form = schur_decompose(A, kind="complex")
        new_form, _ = reorder_checked(A, form, [3, 1, 0, 2])
        np.testing.assert_allclose(
            np.real(np.diag(new_form.T)), [4.0, 2.0, 1.0, 3.0], atol=1e-12
        )


class TestComplexForm:
    def test_random_reorders(self):
        rng = np.random.default_rng(41)
        for trial in range(30):
            n = int(rng.integers(2, 12))
            A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            form = schur_decompose(A, kind="complex")
            k = int(rng.integers(1, n + 1))
            selected = rng.permutation(n)[:k]
            new_form, _ = reorder_checked(A, form, selected)
            want = [form.eigenvalues[i] for i in selected]
            assert_spectra_match(
                new_form.eigenvalues[:k], want, 1e-9 * max(np.linalg.norm(form.T), 1.0)
            )


class TestRealForm:
    def test_pair_moves_whole(self):
        rng = np.random.default_rng(43)
        blocks = np.zeros((5, 5))
        blocks[0, 0] = 2.0
        blocks[1, 1] = -1.5
        blocks[2, 2] = 0.4
        blocks[3:5, 3:5] = [[0.5, 1.0], [-1.0, 0.5]]
        U = random_orthogonal(rng, 5)
        A = U @ blocks @ U.T
        form = schur_decompose(A)
        pair_pos = [s for s, size in diagonal_blocks(form.T) if size == 2][0]
        # selecting one member of the pair drags its partner along
        new_form, _ = reorder_checked(A, form, [pair_pos])
        lead = new_form.eigenvalues[0]
        assert abs(lead - (0.5 + 1j)) < 1e-10 or abs(lead - (0.5 - 1j)) < 1e-10
        assert new_form.eigenvalues[1] == lead.conjugate()

    def test_random_real_reorders(self):
        rng = np.random.default_rng(47)
        for trial in range(30):
            n = int(rng.integers(2, 12))
            A = rng.standard_normal((n, n))
            form = schur_decompose(A)
            k = int(rng.integers(1, n + 1))
            selected = rng.permutation(n)[:k]
            reorder_checked(A, form, selected)

    def test_quasi_triangular_shape_preserved(self):
        rng = np.random.default_rng(53)
        A = rng.standard_normal((9, 9))
        form = schur_decompose(A)
        new_form, _ = reorder_schur(form, [8, 4])
        for start, size in diagonal_blocks(new_form.T):
            below = new_form.T[start + size :, start : start + size]
            assert below.size == 0 or np.abs(below).max() == 0.0


class TestModulusOrdering:
    def test_descending_modulus_then_real_then_imag(self):
        vals = np.array([1.0, -2.0, 2.0, 0.5 + 0.5j, 0.5 - 0.5j])
        order = modulus_descending_order(vals)
        ordered = vals[order]
        np.testing.assert_allclose(np.abs(ordered), sorted(np.abs(vals), reverse=True))
        assert ordered[0] == 2.0 and ordered[1] == -2.0  # tie: larger real part first
        assert ordered[3].imag > 0  # conjugate tie: +imag first

    def test_full_reorder_to_modulus_descending(self):
        rng = np.random.default_rng(59)
        for trial in range(10):
            n = int(rng.integers(2, 10))
            A = rng.standard_normal((n, n))
            form = schur_decompose(A)
            order = modulus_descending_order(form.eigenvalues)
            new_form, _ = reorder_schur(form, order)
            mods = np.abs(new_form.eigenvalues)
            assert np.all(mods[:-1] >= mods[1:] - 1e-10 * max(mods[0], 1.0))

    def test_leading_span_counts_selected_block(self):
        A = np.diag([3.0, 2.0, 1.0])
        form = schur_decompose(A, kind="complex")
        assert leading_span(form, [0, 1]) == 2


class TestErrors:
    def test_out_of_range_selection(self):
        form = schur_decompose(np.diag([2.0, 1.0]), kind="complex")
        with pytest.raises(IndexOutOfRangeError):
            reorder_schur(form, [2])

    def test_duplicate_selection(self):
        form = schur_decompose(np.diag([2.0, 1.0]), kind="complex")
        with pytest.raises(ValueError):
            reorder_schur(form, [0, 0])
