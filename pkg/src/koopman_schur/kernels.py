"""Kernel functions and Gram-matrix assembly for the implicit-dictionary path.

Two kernels: the linear kernel f(x, y) = <x, y> = y* x, whose Gram matrices
reproduce the explicit full-state cross products, and the gaussian kernel
f(x, y) = exp(-||x - y||^2 / (2 sigma^2)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_dense, as_vector
from .exceptions import BadParamsError, DimensionMismatchError

__all__ = ["KernelSpec", "eval_kernel", "gram"]

KERNEL_KINDS = ("linear", "gaussian")


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    sigma: float | None = None

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise BadParamsError(
                f"unknown kernel kind {self.kind!r}; expected one of {KERNEL_KINDS}"
            )
        if self.kind == "gaussian":
            if self.sigma is None or not np.isfinite(self.sigma) or self.sigma <= 0:
                raise BadParamsError("gaussian kernel requires sigma > 0")
        elif self.sigma is not None:
            raise BadParamsError("sigma is only meaningful for the gaussian kernel")


def eval_kernel(spec: KernelSpec, x, y) -> complex | float:
    """Kernel value f(x, y) for a single pair of state vectors."""
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    if x.shape != y.shape:
        raise DimensionMismatchError(f"state dimensions differ: {x.shape} vs {y.shape}")
    if spec.kind == "linear":
        val = np.vdot(y, x)  # conjugates y, the second argument
        return float(val.real) if not np.iscomplexobj(val) or val.imag == 0 else complex(val)
    d2 = float(np.real(np.vdot(x - y, x - y)))
    return float(np.exp(-d2 / (2.0 * spec.sigma**2)))


def gram(spec: KernelSpec, A, B=None) -> np.ndarray:
    """Gram matrix with entry (i, j) = f(a_i, b_j) for column snapshots.

    With B omitted the result is the symmetrized self-Gram (C + C*)/2, so
    tiny roundoff asymmetry never leaks into Hermitian eigensolvers.
    """
    A = as_dense(A, "A")
    self_gram = B is None
    B = A if self_gram else as_dense(B, "B")
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatchError(
            f"snapshot sets have different state dimension: {A.shape[0]} vs {B.shape[0]}"
        )
    if spec.kind == "linear":
        C = A.T @ B.conj()
    else:
        # squared distances via norms and inner products; clamp tiny negatives
        cross = np.real(A.conj().T @ B)
        na = np.real(np.sum(A.conj() * A, axis=0))[:, None]
        nb = np.real(np.sum(B.conj() * B, axis=0))[None, :]
        d2 = np.maximum(na + nb - 2.0 * cross, 0.0)
        C = np.exp(-d2 / (2.0 * spec.sigma**2))
    if self_gram:
        C = 0.5 * (C + C.conj().T)
    return C
