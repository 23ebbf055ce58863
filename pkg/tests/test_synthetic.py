import numpy as np
import pytest

from koopman_schur.exceptions import BadParamsError
from koopman_schur.harness import SYNTHETIC_KINDS, generate_synthetic


class TestLinearSpectrum:
    def test_identity_similarity_gives_pure_decay_columns(self):
        Z = generate_synthetic(
            "linear_spectrum",
            {"eigenvalues": (0.9, 0.5), "similarity": "identity", "x0": (1.0, 1.0)},
            m_total=6,
        )
        assert Z.shape == (2, 7)
        for k in range(7):
            np.testing.assert_allclose(Z[:, k], [0.9**k, 0.5**k], rtol=1e-13)

    def test_complex_eigenvalue_expands_to_rotation_block(self):
        lam = 0.8 * np.exp(0.4j)
        Z = generate_synthetic(
            "linear_spectrum",
            {"eigenvalues": (lam,), "similarity": "identity", "x0": (1.0, 0.0)},
            m_total=5,
        )
        assert Z.shape == (2, 6)
        for k in range(6):
            expected = 0.8**k * np.array([np.cos(0.4 * k), np.sin(0.4 * k)])
            np.testing.assert_allclose(Z[:, k], expected, atol=1e-12)

    def test_orthogonal_similarity_preserves_spectrum(self):
        Z = generate_synthetic(
            "linear_spectrum", {"eigenvalues": (0.95, 0.7, 0.4)}, m_total=12, seed=5
        )
        X, Y = Z[:, :-1], Z[:, 1:]
        A = Y @ np.linalg.pinv(X)
        got = np.sort(np.linalg.eigvals(A).real)[::-1]
        np.testing.assert_allclose(got, [0.95, 0.7, 0.4], atol=1e-8)

    def test_requires_eigenvalues(self):
        with pytest.raises(BadParamsError):
            generate_synthetic("linear_spectrum", {}, m_total=4)

    def test_rejects_negative_imaginary_part(self):
        with pytest.raises(BadParamsError):
            generate_synthetic(
                "linear_spectrum", {"eigenvalues": (0.5 - 0.2j,)}, m_total=4
            )


class TestJordanBlock:
    def test_default_starts_at_last_basis_vector(self):
        Z = generate_synthetic("jordan_block", {"size": 3, "eigenvalue": 0.5}, m_total=4)
        assert Z.shape == (3, 5)
        np.testing.assert_allclose(Z[:, 0], [0.0, 0.0, 1.0])
        # one application: J e3 = 0.5 e3 + e2
        np.testing.assert_allclose(Z[:, 1], [0.0, 1.0, 0.5])

    def test_matches_dense_power_iteration(self):
        Z = generate_synthetic("jordan_block", {"size": 4, "eigenvalue": 0.9}, m_total=6)
        J = 0.9 * np.eye(4) + np.diag(np.ones(3), k=1)
        x = np.zeros(4)
        x[-1] = 1.0
        for k in range(7):
            np.testing.assert_allclose(Z[:, k], x, rtol=1e-13, atol=1e-15)
            x = J @ x


class TestRotation:
    def test_columns_trace_the_unit_circle(self):
        Z = generate_synthetic("rotation", {"angle": 0.3}, m_total=8)
        assert Z.shape == (2, 9)
        for k in range(9):
            np.testing.assert_allclose(
                Z[:, k], [np.cos(0.3 * k), np.sin(0.3 * k)], atol=1e-12
            )


class TestStuartLandauLike:
    def test_converges_to_the_limit_cycle(self):
        Z = generate_synthetic(
            "stuart_landau_like", {"radius": 2.0, "gamma": 1.0, "dt": 0.05}, m_total=2000
        )
        radii = np.linalg.norm(Z, axis=0)
        assert abs(radii[0] - 0.5) < 1e-12  # starts at radius/4
        np.testing.assert_allclose(radii[-100:], 2.0, rtol=1e-4)

    def test_on_cycle_stays_on_cycle(self):
        Z = generate_synthetic(
            "stuart_landau_like", {"x0": (1.0, 0.0), "dt": 0.02}, m_total=500
        )
        radii = np.linalg.norm(Z, axis=0)
        np.testing.assert_allclose(radii, 1.0, rtol=1e-6)

    def test_rotates_with_angular_speed_omega(self):
        dt = 0.01
        Z = generate_synthetic(
            "stuart_landau_like", {"x0": (1.0, 0.0), "omega": 2.0, "dt": dt}, m_total=100
        )
        angles = np.unwrap(np.arctan2(Z[1], Z[0]))
        rates = np.diff(angles) / dt
        np.testing.assert_allclose(rates, 2.0, rtol=1e-4)


class TestContract:
    def test_kind_list_is_exported(self):
        assert set(SYNTHETIC_KINDS) == {
            "linear_spectrum",
            "jordan_block",
            "rotation",
            "stuart_landau_like",
        }

    def test_deterministic_per_seed(self):
        params = {"eigenvalues": (0.9, 0.5)}
        a = generate_synthetic("linear_spectrum", params, 10, seed=3)
        b = generate_synthetic("linear_spectrum", params, 10, seed=3)
        c = generate_synthetic("linear_spectrum", params, 10, seed=4)
        assert np.array_equal(a, b)
        # the seed picks the random orthogonal basis
        assert not np.array_equal(a, c)

    def test_unknown_kind_rejected(self):
        with pytest.raises(BadParamsError):
            generate_synthetic("van_der_pol", {}, m_total=4)

    def test_unknown_parameter_rejected(self):
        with pytest.raises(BadParamsError):
            generate_synthetic("rotation", {"speed": 1.0}, m_total=4)

    def test_m_total_must_be_positive(self):
        with pytest.raises(BadParamsError):
            generate_synthetic("rotation", {}, m_total=0)
