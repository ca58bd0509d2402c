"""Causal sliding window of unit-norm frame descriptors and its affinity matrix.

The window holds the most recent <= W frames, oldest first, with the current
frame always in the last slot. The affinity matrix maps pairwise cosine
similarity through (cos + 1) / 2, so entries live in [0, 1]: high values mean
redundant frames, low values mean novelty. The diagonal is forced to exactly 1
rather than trusting unit-norm arithmetic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonMonotonicTimestep, ZeroVector

_ZERO_NORM_FLOOR = 1e-12


@dataclass(frozen=True, slots=True)
class FrameFeature:
    """One unit-norm descriptor with its timestep index."""

    t: int
    f: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.f.shape[0])


def normalize_feature(raw, t: int = 0) -> FrameFeature:
    """Scale a raw descriptor to unit L2 norm, preserving direction.

    Raises ZeroVector when the norm is below 1e-12. Input is copied to
    float64 regardless of the source precision.
    """
    f = np.asarray(raw, dtype=np.float64).reshape(-1)
    if f.shape[0] < 1:
        raise ValueError("feature vector must have dimension >= 1")
    norm = float(np.linalg.norm(f))
    if norm < _ZERO_NORM_FLOOR:
        raise ZeroVector(f"feature at t={t} has norm {norm:.3e}")
    return FrameFeature(t=int(t), f=f / norm)


class AffinityWindow:
    """Ring buffer of the last <= capacity frames, strictly increasing in t.

    Single-writer: one stream mutates one window. The backing matrix is
    preallocated once the dimension is known (first push).
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"window capacity must be >= 1, got {capacity}")
        self.capacity = int(capacity)
        self._frames: deque[FrameFeature] = deque(maxlen=self.capacity)
        self._buf: np.ndarray | None = None  # (capacity, dim) ring storage
        self._next = 0  # ring slot receiving the next push
        self._count = 0

    @property
    def occupancy(self) -> int:
        return self._count

    @property
    def dim(self) -> int | None:
        return None if self._buf is None else int(self._buf.shape[1])

    @property
    def newest_t(self) -> int | None:
        return self._frames[-1].t if self._frames else None

    @property
    def frames(self) -> tuple[FrameFeature, ...]:
        """Window contents, oldest first; the newest frame is last."""
        return tuple(self._frames)

    def push(self, feat: FrameFeature) -> None:
        """Append a frame, evicting the oldest when full.

        Raises NonMonotonicTimestep unless feat.t strictly exceeds the newest
        stored timestep, and DimensionMismatch if the dimension changes.
        """
        newest = self.newest_t
        if newest is not None and feat.t <= newest:
            raise NonMonotonicTimestep(
                f"timestep {feat.t} does not advance past {newest}"
            )
        if self._buf is None:
            self._buf = np.empty((self.capacity, feat.dim), dtype=np.float64)
        elif feat.dim != self._buf.shape[1]:
            raise DimensionMismatch(
                f"feature dim {feat.dim} != window dim {self._buf.shape[1]}"
            )
        self._buf[self._next] = feat.f
        self._next = (self._next + 1) % self.capacity
        self._count = min(self._count + 1, self.capacity)
        self._frames.append(feat)

    def feature_matrix(self) -> np.ndarray:
        """Stacked descriptors, one row per frame, oldest first."""
        if self._count == 0:
            raise ValueError("window is empty")
        assert self._buf is not None
        if self._count < self.capacity:
            return self._buf[: self._count].copy()
        # full ring: rows [next..end) are the oldest, [0..next) the newest
        return np.concatenate((self._buf[self._next :], self._buf[: self._next]))


def build_affinity(window: AffinityWindow) -> np.ndarray:
    """Affinity matrix over the window: elementwise (cos + 1) / 2.

    Pure function of the window contents; identical windows yield
    bit-identical matrices. Diagonal forced to exactly 1, entries clipped
    into [0, 1] to absorb last-ulp cosine overshoot.
    """
    f = window.feature_matrix()
    a = 0.5 * (f @ f.T + 1.0)
    np.fill_diagonal(a, 1.0)
    np.clip(a, 0.0, 1.0, out=a)
    return a
