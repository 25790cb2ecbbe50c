"""Two-layer network: frozen random projection into a sigmoid output layer
trained online by momentum SGD on mean squared error.

Only the output layer learns. The gradient of 1/2 * sum((o_c - t_c)^2)
w.r.t. output weights V_c is delta_c * z with delta_c = (o_c - t_c) * o_c *
(1 - o_c); velocities follow the classical momentum form v <- mu*v - eta*grad.
"""

from __future__ import annotations

import itertools
import math
import time

import numpy as np

from . import backend
from .core import Classifier, Instance, Schema, encode_dense
from .features import RandomFeatureFilter

__all__ = [
    "RandomProjectionNetwork",
    "GridSearchSpec",
    "grid_search",
    "batched_apply",
    "DEFAULT_SIZE_GRID",
    "DEFAULT_MU_GRID",
    "DEFAULT_ETA_GRID",
    "DEFAULT_GAMMA_GRID",
]

# sweep defaults: sizes 10..100 step 10, 100..1000 step 100, plus 1500 and 2000;
# momentum 0.1..1.0 step 0.1; learning rate 0.01..1.01 step 0.1
DEFAULT_SIZE_GRID = tuple(range(10, 101, 10)) + tuple(range(200, 1001, 100)) + (1500, 2000)
DEFAULT_MU_GRID = tuple(round(0.1 * i, 1) for i in range(1, 11))
DEFAULT_ETA_GRID = tuple(round(0.01 + 0.1 * i, 2) for i in range(0, 11))
DEFAULT_GAMMA_GRID = (0.001, 0.01, 0.1, 1.0, 10.0)


def _sigmoid(a):
    # stable in both tails
    out = np.empty_like(a)
    pos = a >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a[pos]))
    ea = np.exp(a[~pos])
    out[~pos] = ea / (1.0 + ea)
    return out


class RandomProjectionNetwork(Classifier):
    """Frozen random layer (h units) feeding a trained sigmoid output layer.

    Output weights start from the sigmoid initialization scaled by fan-in
    (std 0.9/sqrt(h) weights, std 0.2 biases) so the output pre-activations
    stay in the responsive range of the sigmoid at any width; an unscaled
    0.9 std saturates the outputs for h beyond a few dozen units and the
    (o - t) * o * (1 - o) gradient can never pull them back. Velocity
    buffers start at zero. The random layer's weights never change,
    whatever the training history.
    """

    def __init__(self, schema: Schema, h: int, activation: str = "sigmoid",
                 eta: float = 0.01, mu: float = 0.0, gamma: float = 1.0, seed: int = 1):
        super().__init__(schema)
        if eta < 0:
            raise ValueError("learning rate must be >= 0")
        if not 0.0 <= mu <= 1.0:
            raise ValueError("momentum must be in [0,1]")
        self.h = h
        self.activation = activation
        self.eta = eta
        self.mu = mu
        self.gamma = gamma
        self.seed = seed
        self._build()

    def _build(self):
        d = self.schema.encoded_width
        C = self.schema.n_classes
        filter_seed = int(np.random.SeedSequence([self.seed, 0]).generate_state(1)[0])
        out_seed = int(np.random.SeedSequence([self.seed, 1]).generate_state(1)[0])
        self.random_layer = RandomFeatureFilter(filter_seed, d, self.h, self.activation, self.gamma)
        rng = np.random.Generator(np.random.PCG64(out_seed))
        self.out_weights = rng.normal(0.0, 0.9 / math.sqrt(self.h), size=(self.h, C))
        self.out_bias = rng.normal(0.0, 0.2, size=C)
        self.vel_weights = np.zeros_like(self.out_weights)
        self.vel_bias = np.zeros_like(self.out_bias)
        self._cache_key = None
        self._cache_z = None

    def _project(self, instance: Instance) -> np.ndarray:
        if instance is self._cache_key:
            return self._cache_z
        z = self.random_layer.project(encode_dense(self.schema, instance.values))
        self._cache_key = instance
        self._cache_z = z
        return z

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Class scores for an already-encoded input vector."""
        z = self.random_layer.project(x)
        return _sigmoid(backend.affine(self.out_weights, z, self.out_bias))

    def predict(self, instance: Instance) -> np.ndarray:
        z = self._project(instance)
        return _sigmoid(backend.affine(self.out_weights, z, self.out_bias))

    def train(self, instance: Instance, weight: float = 1.0) -> None:
        z = self._project(instance)
        o = _sigmoid(backend.affine(self.out_weights, z, self.out_bias))
        delta = o.copy()
        delta[instance.label] -= 1.0
        delta *= o * (1.0 - o)
        w = weight * instance.weight
        if w != 1.0:
            delta *= w
        backend.rpn_step(
            self.out_weights, self.out_bias, self.vel_weights, self.vel_bias,
            z, delta, self.eta, self.mu,
        )

    def reset(self) -> None:
        self._build()


def batched_apply(matrix: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Apply a d-by-h matrix to a batch of row vectors (n-by-d) at once.

    Numerically equivalent (to reordering tolerance) to applying the matrix
    to each vector separately.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim == 1:
        vectors = vectors[None, :]
    if vectors.shape[1] != matrix.shape[0]:
        raise ValueError(
            f"shape mismatch: vectors have width {vectors.shape[1]}, matrix expects {matrix.shape[0]}"
        )
    return backend.matmat(vectors, matrix)


class GridSearchSpec:
    """Hyper-parameter grid for the projection network sweep."""

    def __init__(self, activations=("sigmoid",), sizes=DEFAULT_SIZE_GRID,
                 mus=DEFAULT_MU_GRID, etas=DEFAULT_ETA_GRID,
                 gammas=(1.0,), budget: int = 10000, seed: int = 1):
        if not activations or not sizes or not mus or not etas or not gammas:
            raise ValueError("empty grid dimension")
        if any(s < 1 for s in sizes):
            raise ValueError("sizes must be >= 1")
        if budget < 1:
            raise ValueError("budget must be >= 1")
        self.activations = tuple(activations)
        self.sizes = tuple(sizes)
        self.mus = tuple(mus)
        self.etas = tuple(etas)
        self.gammas = tuple(gammas)
        self.budget = budget
        self.seed = seed

    def configurations(self):
        for act, h, mu, eta in itertools.product(self.activations, self.sizes, self.mus, self.etas):
            gammas = self.gammas if act == "rbf" else (1.0,)
            for g in gammas:
                yield {"activation": act, "h": h, "mu": mu, "eta": eta, "gamma": g}


def _evaluate_config(stream, config, budget, seed) -> dict:
    net = RandomProjectionNetwork(
        stream.schema, config["h"], config["activation"],
        eta=config["eta"], mu=config["mu"], gamma=config["gamma"], seed=seed,
    )
    correct = 0
    n = 0
    start = time.perf_counter()
    for inst in stream:
        if n >= budget:
            break
        votes = net.predict(inst)
        if int(np.argmax(votes)) == inst.label:
            correct += 1
        net.train(inst)
        n += 1
    row = dict(config)
    row["accuracy"] = correct / n if n else 0.0
    row["instances"] = n
    row["elapsed_s"] = time.perf_counter() - start
    return row


def _evaluate_config_job(args) -> dict:
    stream_factory, config, budget, seed = args
    return _evaluate_config(stream_factory(), config, budget, seed)


def grid_search(spec: GridSearchSpec, stream_factory, workers: int = 1) -> list[dict]:
    """Prequentially evaluate every configuration on a fresh stream.

    Returns configurations sorted best-first by final accuracy, breaking
    ties by smaller hidden size and then lower runtime. With ``workers > 1``
    grid cells run in parallel processes (each cell stays internally
    sequential, so results match the sequential run); the stream factory
    must then be picklable.
    """
    configs = list(spec.configurations())
    if workers > 1 and len(configs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        jobs = [(stream_factory, config, spec.budget, spec.seed) for config in configs]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_config_job, jobs))
    else:
        results = [_evaluate_config(stream_factory(), c, spec.budget, spec.seed) for c in configs]
    results.sort(key=lambda r: (-r["accuracy"], r["h"], r["elapsed_s"]))
    return results
