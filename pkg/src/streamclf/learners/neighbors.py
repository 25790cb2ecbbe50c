"""Sliding-window k-nearest-neighbors over encoded instance vectors."""

from __future__ import annotations

import numpy as np

from .. import backend
from ..core import Classifier, Instance, Schema, encode_dense

__all__ = ["KnnClassifier"]


class KnnClassifier(Classifier):
    """kNN over a FIFO window of the last ``window`` encoded instances.

    Prediction counts the classes of the k nearest stored points by
    Euclidean distance; distance ties prefer the older insertion. The
    buffer grows geometrically up to the window capacity, then overwrites
    oldest-first.
    """

    def __init__(self, schema: Schema, k: int = 10, window: int = 5000):
        super().__init__(schema)
        if k < 1 or window < 1:
            raise ValueError("k and window must be >= 1")
        self.k = k
        self.window = window
        self._init_buffers()

    def _init_buffers(self):
        cap = min(256, self.window)
        self._buf = np.empty((cap, self.schema.encoded_width))
        self._labels = np.empty(cap, dtype=np.int64)
        self._seq = np.empty(cap, dtype=np.int64)
        self._size = 0
        self._ptr = 0
        self._inserted = 0

    def _grow(self):
        cap = min(self._buf.shape[0] * 2, self.window)
        self._buf = np.resize(self._buf, (cap, self._buf.shape[1]))
        self._labels = np.resize(self._labels, cap)
        self._seq = np.resize(self._seq, cap)

    def train(self, instance: Instance, weight: float = 1.0) -> None:
        # weight does not change what is stored: one slot per example
        if self._size == self._buf.shape[0] and self._size < self.window:
            self._grow()
        x = encode_dense(self.schema, instance.values)
        self._buf[self._ptr] = x
        self._labels[self._ptr] = instance.label
        self._seq[self._ptr] = self._inserted
        self._inserted += 1
        if self._size < self.window:
            self._size += 1
        self._ptr = (self._ptr + 1) % self.window

    def predict(self, instance: Instance) -> np.ndarray:
        C = self.schema.n_classes
        if self._size == 0:
            return np.full(C, 1.0 / C)
        x = encode_dense(self.schema, instance.values)
        d2 = backend.sq_dists(self._buf[: self._size], x)
        if self._size <= self.k:
            nearest = np.arange(self._size)
        else:
            # stable under distance ties: older insertions win
            nearest = np.lexsort((self._seq[: self._size], d2))[: self.k]
        votes = np.bincount(self._labels[nearest], minlength=C).astype(np.float64)
        return votes

    def reset(self) -> None:
        self._init_buffers()
