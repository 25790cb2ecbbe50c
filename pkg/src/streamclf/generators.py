"""Seeded synthetic stream generators: random-RBF (static and drifting),
rotating hyperplane, and the noisy LED digit display.

Every generator is a pure function of (seed, draw index): iterating the same
configured object twice replays the stream bit-exactly, with drift state
rebuilt from the seed on each pass.
"""

from __future__ import annotations

import numpy as np

from .core import Instance, InstanceStream, make_schema, nominal, numeric

__all__ = ["RbfGenerator", "HyperplaneGenerator", "LedGenerator", "LED_SEGMENTS"]


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


class RbfGenerator(InstanceStream):
    """Random-RBF stream: Gaussian blobs around weighted random centroids.

    Each draw picks a centroid with probability proportional to its weight,
    then offsets the center along a random direction by a Gaussian length
    scaled with the centroid's std-dev (the standard RandomRBF construction),
    labeling the point with the centroid's class. With ``drift_speed > 0``
    every centroid center translates by exactly that Euclidean distance per
    instance along its own random direction, reflecting at the [0,1] bounds.
    """

    def __init__(self, seed=1, n_attributes=10, n_classes=2, n_centroids=50,
                 drift_speed=0.0):
        if n_centroids < 1 or n_attributes < 1 or n_classes < 2:
            raise ValueError("need >=1 centroid, >=1 attribute, >=2 classes")
        if drift_speed < 0:
            raise ValueError("drift_speed must be >= 0")
        self.seed = seed
        self.n_attributes = n_attributes
        self.n_classes = n_classes
        self.n_centroids = n_centroids
        self.drift_speed = drift_speed
        self.schema = make_schema(
            [numeric(f"a{i}") for i in range(n_attributes)],
            [f"c{i}" for i in range(n_classes)],
        )

    def _init_state(self):
        rng = _rng(self.seed)
        k, d = self.n_centroids, self.n_attributes
        centers = rng.random((k, d))
        labels = rng.integers(0, self.n_classes, size=k)
        weights = rng.random(k)
        stds = rng.random(k)
        directions = rng.normal(size=(k, d))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        return rng, centers, labels, weights, stds, directions

    def __iter__(self):
        rng, centers, labels, weights, stds, directions = self._init_state()
        cumw = np.cumsum(weights)
        total = cumw[-1]
        speed = self.drift_speed
        while True:
            i = int(np.searchsorted(cumw, rng.random() * total, side="right"))
            i = min(i, self.n_centroids - 1)
            direction = rng.uniform(-1.0, 1.0, self.n_attributes)
            norm = np.linalg.norm(direction)
            if norm > 0.0:
                direction /= norm
            offset_length = rng.normal(0.0, 1.0) * stds[i]
            values = centers[i] + direction * offset_length
            yield Instance(values, int(labels[i]))
            if speed > 0.0:
                centers += speed * directions
                # reflect drifting centers back into the unit cube
                low = centers < 0.0
                high = centers > 1.0
                centers[low] = -centers[low]
                centers[high] = 2.0 - centers[high]
                directions[low | high] *= -1.0


class HyperplaneGenerator(InstanceStream):
    """Hyperplane stream: uniform points in [0,1]^d labeled by which side of
    sum(w_i * x_i) = sum(w_i)/2 they fall on, with label noise.

    ``mag_change > 0`` shifts each weight by that amount per instance along a
    fixed random +-1 direction, rotating the decision boundary over time.
    """

    def __init__(self, seed=1, n_attributes=10, noise=0.05, mag_change=0.0,
                 weights=None):
        if not 0.0 <= noise <= 1.0:
            raise ValueError("noise must be in [0,1]")
        self.seed = seed
        self.n_attributes = n_attributes
        self.noise = noise
        self.mag_change = mag_change
        self.fixed_weights = None if weights is None else np.asarray(weights, float)
        self.schema = make_schema(
            [numeric(f"a{i}") for i in range(n_attributes)], ["c0", "c1"]
        )

    def __iter__(self):
        rng = _rng(self.seed)
        d = self.n_attributes
        w = rng.random(d) if self.fixed_weights is None else self.fixed_weights.copy()
        directions = rng.choice([-1.0, 1.0], size=d)
        while True:
            x = rng.random(d)
            label = 1 if float(w @ x) > 0.5 * float(w.sum()) else 0
            if rng.random() < self.noise:
                label = 1 - label
            yield Instance(x, label)
            if self.mag_change > 0.0:
                w += self.mag_change * directions


# Seven-segment encodings (segments a-g) for the digits 0-9.
LED_SEGMENTS = np.array(
    [
        [1, 1, 1, 1, 1, 1, 0],  # 0
        [0, 1, 1, 0, 0, 0, 0],  # 1
        [1, 1, 0, 1, 1, 0, 1],  # 2
        [1, 1, 1, 1, 0, 0, 1],  # 3
        [0, 1, 1, 0, 0, 1, 1],  # 4
        [1, 0, 1, 1, 0, 1, 1],  # 5
        [1, 0, 1, 1, 1, 1, 1],  # 6
        [1, 1, 1, 0, 0, 0, 0],  # 7
        [1, 1, 1, 1, 1, 1, 1],  # 8
        [1, 1, 1, 1, 0, 1, 1],  # 9
    ],
    dtype=np.int64,
)


class LedGenerator(InstanceStream):
    """LED digit stream: 7 segment bits for a random digit, each inverted
    with the noise probability, plus 17 irrelevant uniform bits.
    """

    N_RELEVANT = 7
    N_IRRELEVANT = 17

    def __init__(self, seed=1, noise=0.1):
        if not 0.0 <= noise <= 1.0:
            raise ValueError("noise must be in [0,1]")
        self.seed = seed
        self.noise = noise
        n = self.N_RELEVANT + self.N_IRRELEVANT
        self.schema = make_schema(
            [nominal(f"a{i}", ("0", "1")) for i in range(n)],
            [str(dig) for dig in range(10)],
        )

    def __iter__(self):
        rng = _rng(self.seed)
        while True:
            digit = int(rng.integers(0, 10))
            segments = LED_SEGMENTS[digit].astype(np.float64)
            flips = rng.random(self.N_RELEVANT) < self.noise
            segments[flips] = 1.0 - segments[flips]
            irrelevant = rng.integers(0, 2, size=self.N_IRRELEVANT).astype(np.float64)
            yield Instance(np.concatenate([segments, irrelevant]), digit)
