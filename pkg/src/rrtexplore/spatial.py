"""Incremental 2-d kd-tree for nearest-node queries."""

from __future__ import annotations

from typing import Tuple

import numpy as np

from . import kernels


class KdTree:
    """Point-insertion kd-tree; split axis alternates x, y with depth.

    Points are never removed individually. Callers that drop points
    rebuild the tree with :meth:`reset` and re-insert the survivors.
    """

    def __init__(self, capacity: int = 256):
        self._alloc(max(int(capacity), 1))
        self.n = 0

    def _alloc(self, cap):
        self.xs = np.empty(cap, dtype=np.float64)
        self.ys = np.empty(cap, dtype=np.float64)
        self.left = np.empty(cap, dtype=np.int64)
        self.right = np.empty(cap, dtype=np.int64)

    def _grow(self):
        cap = 2 * len(self.xs)
        xs, ys, left, right = self.xs, self.ys, self.left, self.right
        self._alloc(cap)
        k = self.n
        self.xs[:k], self.ys[:k], self.left[:k], self.right[:k] = xs[:k], ys[:k], left[:k], right[:k]

    def __len__(self) -> int:
        return self.n

    def reset(self) -> None:
        self.n = 0

    def insert(self, x: float, y: float) -> int:
        if self.n == len(self.xs):
            self._grow()
        k = self.n
        self.xs[k] = x
        self.ys[k] = y
        kernels.kd_insert(self.xs, self.ys, self.left, self.right, k)
        self.n += 1
        return k

    def nearest(self, x: float, y: float) -> Tuple[int, float]:
        """Index and squared distance of the closest point; ``(-1, inf)`` when empty."""
        return kernels.kd_nearest(self.xs, self.ys, self.left, self.right, self.n, x, y)
