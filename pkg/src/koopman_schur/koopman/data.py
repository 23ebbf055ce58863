"""Snapshot-pair containers and trajectory-to-pairs conversion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._validation import as_dense, frozen
from ..exceptions import DimensionMismatchError, TooFewSnapshotsError

__all__ = ["SnapshotPairs", "pairs_from_trajectory", "pairs_from_trajectories"]


@dataclass(frozen=True)
class SnapshotPairs:
    """Columns of X are states x_1..x_m, columns of Y their images y_i = F(x_i)."""

    X: np.ndarray
    Y: np.ndarray
    dt: float = 1.0

    def __post_init__(self):
        X = as_dense(self.X, "X")
        Y = as_dense(self.Y, "Y")
        if X.shape != Y.shape:
            raise DimensionMismatchError(
                f"X and Y must have identical shape; got {X.shape} and {Y.shape}"
            )
        if X.shape[1] < 2:
            raise TooFewSnapshotsError(f"need at least 2 snapshot pairs, got {X.shape[1]}")
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be a positive real, got {self.dt}")
        object.__setattr__(self, "X", frozen(X))
        object.__setattr__(self, "Y", frozen(Y))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def m(self) -> int:
        return self.X.shape[1]


def pairs_from_trajectory(Z, dt: float = 1.0) -> SnapshotPairs:
    """z_1..z_{m+1} -> X = (z_1..z_m), Y = (z_2..z_{m+1})."""
    Z = as_dense(Z, "trajectory")
    if Z.shape[1] < 3:
        raise TooFewSnapshotsError(
            f"trajectory needs at least 3 snapshots to form 2 pairs, got {Z.shape[1]}"
        )
    return SnapshotPairs(X=Z[:, :-1], Y=Z[:, 1:], dt=dt)


def pairs_from_trajectories(trajectories, dt: float = 1.0) -> SnapshotPairs:
    """Concatenate the pairs of several independent trajectories."""
    xs, ys = [], []
    for k, Z in enumerate(trajectories):
        Z = as_dense(Z, f"trajectory {k}")
        if Z.shape[1] < 2:
            raise TooFewSnapshotsError(
                f"trajectory {k} needs at least 2 snapshots, got {Z.shape[1]}"
            )
        xs.append(Z[:, :-1])
        ys.append(Z[:, 1:])
    if not xs:
        raise TooFewSnapshotsError("no trajectories given")
    return SnapshotPairs(X=np.hstack(xs), Y=np.hstack(ys), dt=dt)
