"""Diagonalization baselines (state-space and kernel variants).

Ground truths: generator spectra, the closed-form eigenstructure of the
perturbed 2x2 Jordan block, the eigenvector relation U S = S Lambda, and
agreement with the Schur route on normal data.
"""

import numpy as np
import pytest

from helpers import assert_spectra_match
from koopman_schur.exceptions import BadParamsError
from koopman_schur.kernels import KernelSpec
from koopman_schur.koopman import (
    SnapshotPairs,
    build_diag_model,
    build_ks_model,
    diag_forecast,
    diag_reconstruct,
    diagonalize_operator,
    evaluate_eigenfunctions,
    pairs_from_trajectory,
)

LINEAR = KernelSpec("linear")


def trajectory(A, x0, m_total):
    Z = np.empty((len(x0), m_total + 1))
    Z[:, 0] = x0
    for k in range(m_total):
        Z[:, k + 1] = A @ Z[:, k]
    return Z


def rotation_data(theta=0.3, m=8):
    A = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    return A, pairs_from_trajectory(trajectory(A, [1.0, 0.0], m))


class TestDiagonalizeOperator:
    def test_perturbed_jordan_block(self):
        eps = 1e-12
        uhat = np.array([[1.0, 1.0], [eps, 1.0]])
        lam, S, cond = diagonalize_operator(uhat)
        assert_spectra_match(lam, [1.0 + np.sqrt(eps), 1.0 - np.sqrt(eps)], 1e-10)
        assert cond > 1.0 / np.sqrt(eps)

    def test_normal_matrix_condition_one(self):
        theta = 0.4
        R = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        lam, S, cond = diagonalize_operator(R)
        assert cond <= 1.0 + 1e-8

    def test_modulus_descending_output(self):
        lam, _, _ = diagonalize_operator(np.diag([0.2, 0.9, 0.5]))
        np.testing.assert_allclose(np.abs(lam), [0.9, 0.5, 0.2], atol=1e-14)


class TestBuildDiagModel:
    def test_rotation_matches_schur_route(self):
        _, data = rotation_data()
        diag = build_diag_model(data, variant="dmd")
        ks = build_ks_model(data, dictionary="explicit")
        assert diag.eigvec_condition <= 1.0 + 1e-8
        assert_spectra_match(diag.eigenvalues, ks.eigenvalues, 1e-10)

    def test_edmd_matches_dmd_on_linear_kernel(self):
        rng = np.random.default_rng(151)
        X = rng.standard_normal((3, 7))
        Y = rng.standard_normal((3, 7))
        data = SnapshotPairs(X, Y)
        dmd = build_diag_model(data, variant="dmd")
        edmd = build_diag_model(data, kernel=LINEAR, variant="edmd")
        assert_spectra_match(dmd.eigenvalues, edmd.eigenvalues, 1e-10)

    def test_eigvec_relation_both_variants(self):
        rng = np.random.default_rng(157)
        for variant in ("dmd", "edmd"):
            X = rng.standard_normal((4, 9))
            Y = rng.standard_normal((4, 9))
            model = build_diag_model(SnapshotPairs(X, Y), variant=variant)
            r = model.svd.rank
            resid = np.linalg.norm(
                model.uhat @ model.S - model.S @ np.diag(model.eigenvalues)
            )
            assert resid <= 1e-10 * max(np.linalg.norm(model.uhat), 1.0) * r

    def test_identity_dynamics_reconstructs(self):
        rng = np.random.default_rng(163)
        X = rng.standard_normal((3, 6))
        model = build_diag_model(SnapshotPairs(X, X), variant="dmd")
        Xhat, _, worst = diag_reconstruct(model)
        assert worst <= 1e-10
        np.testing.assert_allclose(np.real(Xhat), X, atol=1e-10)

    def test_unknown_variant(self):
        _, data = rotation_data()
        with pytest.raises(BadParamsError):
            build_diag_model(data, variant="exact")

    def test_jordan_trajectory_reports_singular_sentinel(self):
        # length-12 chain of a 10x10 Jordan block: eigenvector matrix of the
        # compressed operator is numerically singular
        n = 10
        A = 0.9 * np.eye(n) + np.diag(np.ones(n - 1), 1)
        x0 = np.zeros(n)
        x0[-1] = 1.0
        data = pairs_from_trajectory(trajectory(A, x0, 12))
        model = build_diag_model(data, variant="dmd")
        assert model.eigvec_condition >= 1e12


class TestEvaluateAndForecast:
    def test_training_point_matches_tabulated_row(self):
        _, data = rotation_data()
        for variant in ("dmd", "edmd"):
            model = build_diag_model(data, variant=variant)
            row = evaluate_eigenfunctions(model, data.X[:, 0])
            scale = np.linalg.norm(model.phi_x)
            assert np.abs(row - model.phi_x[0]).max() <= 1e-10 * scale

    def test_rotation_forecast(self):
        A, data = rotation_data(m=12)
        model = build_diag_model(data, variant="dmd")
        x0 = data.X[:, -1]
        pred = diag_forecast(model, x0, 10)
        truth = x0.copy()
        for k in range(10):
            truth = A @ truth
            assert np.linalg.norm(pred[:, k] - truth) <= 1e-8

    def test_bad_horizon(self):
        _, data = rotation_data()
        model = build_diag_model(data)
        with pytest.raises(BadParamsError):
            diag_forecast(model, data.X[:, 0], 0)
