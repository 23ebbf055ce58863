"""Shared test utilities.

assert_spectra_match compares eigenvalue multisets by greedy nearest
matching.  Sorting complex arrays is the wrong tool for this: conjugate
pairs differ in real part only at roundoff level, so lexicographic order is
unstable and a sorted elementwise compare can pair the wrong entries.

charpoly_roots is an eigenvalue oracle that shares no code path with the
Schur iteration under test: Faddeev-LeVerrier for the characteristic
polynomial coefficients, then numpy's polynomial root finder.  Only usable
at small sizes, which is all the oracle tests need.
"""

import numpy as np

__all__ = ["assert_spectra_match", "charpoly_roots", "random_orthogonal"]


def assert_spectra_match(actual, expected, tol, label="spectrum"):
    actual = [complex(v) for v in np.asarray(actual).ravel()]
    expected = [complex(v) for v in np.asarray(expected).ravel()]
    assert len(actual) == len(expected), (
        f"{label}: {len(actual)} eigenvalues, expected {len(expected)}"
    )
    remaining = list(expected)
    worst = 0.0
    for lam in actual:
        gaps = [abs(lam - mu) for mu in remaining]
        j = int(np.argmin(gaps))
        worst = max(worst, gaps[j])
        remaining.pop(j)
    assert worst <= tol, f"{label}: worst eigenvalue mismatch {worst:.3e} > {tol:.3e}"


def charpoly_roots(A):
    A = np.asarray(A)
    n = A.shape[0]
    # Faddeev-LeVerrier: c[k] collects det(A - lambda I) coefficients
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    M = np.zeros_like(A, dtype=complex)
    for k in range(1, n + 1):
        M = A @ M + coeffs[k - 1] * np.eye(n)
        coeffs[k] = -np.trace(A @ M) / k
    return np.roots(coeffs)


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))
