"""Dense linear algebra kernels: Hermitian eigensolve, truncated SVD from
Gram matrices, Schur decomposition and eigenvalue reordering."""

from .decompositions import (
    TruncatedSvd,
    economy_svd,
    hermitian_eig,
    spectral_condition,
    truncated_svd_from_gram,
    upper_triangular_transpose_apply,
)
from .ordering import leading_span, modulus_descending_order, reorder_schur
from .schur import SchurForm, diagonal_blocks, schur_decompose

__all__ = [
    "TruncatedSvd",
    "economy_svd",
    "hermitian_eig",
    "spectral_condition",
    "truncated_svd_from_gram",
    "upper_triangular_transpose_apply",
    "SchurForm",
    "diagonal_blocks",
    "schur_decompose",
    "reorder_schur",
    "modulus_descending_order",
    "leading_span",
]
