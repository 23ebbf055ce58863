"""Data compression to the Rayleigh quotient.

Ground truths: identity dynamics give the identity quotient, generator
spectra survive compression exactly on linear data, and the kernel (Gram)
route agrees with the explicit SVD route for the linear kernel.
"""

import numpy as np
import pytest

from helpers import assert_spectra_match
from koopman_schur.exceptions import RankCollapseError, TooFewSnapshotsError
from koopman_schur.kernels import KernelSpec
from koopman_schur.koopman import (
    SnapshotPairs,
    explicit_quotient,
    pairs_from_trajectory,
    rayleigh_quotient,
)

LINEAR = KernelSpec("linear")


def rotation_pairs(theta=0.3, m=8):
    A = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    Z = np.empty((2, m + 1))
    Z[:, 0] = [1.0, 0.0]
    for k in range(m):
        Z[:, k + 1] = A @ Z[:, k]
    return pairs_from_trajectory(Z)


class TestSnapshotPairs:
    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            SnapshotPairs(np.ones((2, 3)), np.ones((2, 4)))

    def test_too_few_snapshots(self):
        with pytest.raises(TooFewSnapshotsError):
            SnapshotPairs(np.ones((2, 1)), np.ones((2, 1)))

    def test_pairs_from_trajectory_convention(self):
        Z = np.arange(8.0).reshape(2, 4)
        data = pairs_from_trajectory(Z)
        np.testing.assert_array_equal(data.X, Z[:, :-1])
        np.testing.assert_array_equal(data.Y, Z[:, 1:])


class TestRayleighQuotient:
    def test_fixed_point_gives_identity(self):
        rng = np.random.default_rng(83)
        X = rng.standard_normal((3, 5))
        svd, uhat = rayleigh_quotient(SnapshotPairs(X, X), LINEAR)
        np.testing.assert_allclose(uhat, np.eye(svd.rank), atol=1e-12)

    def test_diagonal_generator_spectrum(self):
        X = np.eye(2)
        Y = np.diag([0.9, 0.5]) @ X
        svd, uhat = rayleigh_quotient(SnapshotPairs(X, Y), LINEAR)
        assert_spectra_match(np.linalg.eigvals(uhat), [0.9, 0.5], 1e-12)

    def test_rotation_ritz_values(self):
        data = rotation_pairs()
        svd, uhat = rayleigh_quotient(data, LINEAR)
        expected = [np.exp(0.3j), np.exp(-0.3j)]
        assert_spectra_match(np.linalg.eigvals(uhat), expected, 1e-10)

    def test_rank_collapse(self):
        X = np.full((2, 4), 1e-200)
        with pytest.raises((RankCollapseError, ValueError)):
            rayleigh_quotient(SnapshotPairs(X, X), LINEAR, tol=0.999)


class TestExplicitQuotient:
    def test_agrees_with_gram_route_on_linear_kernel(self):
        rng = np.random.default_rng(89)
        for trial in range(10):
            n, m = int(rng.integers(2, 6)), int(rng.integers(4, 9))
            X = rng.standard_normal((n, m))
            Y = rng.standard_normal((n, m))
            data = SnapshotPairs(X, Y)
            svd_g, uhat_g = rayleigh_quotient(data, LINEAR)
            svd_e, uhat_e, V = explicit_quotient(data)
            assert svd_g.rank == svd_e.rank
            np.testing.assert_allclose(svd_g.sigma, svd_e.sigma, rtol=1e-9)
            assert_spectra_match(
                np.linalg.eigvals(uhat_g), np.linalg.eigvals(uhat_e), 1e-9
            )

    def test_right_factor_reconstructs_data(self):
        rng = np.random.default_rng(97)
        X = rng.standard_normal((3, 6))
        data = SnapshotPairs(X, X)
        svd, uhat, V = explicit_quotient(data)
        np.testing.assert_allclose(
            svd.W @ np.diag(svd.sigma) @ V.conj().T, X.T, atol=1e-12
        )
