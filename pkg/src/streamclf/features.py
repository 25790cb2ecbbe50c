"""Frozen random feature projections: x in R^d -> z in R^h.

A filter draws its weights once from a seeded Gaussian and never trains.
It can sit in front of any classifier (as a stream filter or a classifier
wrapper) or inside tree leaves. Supported activations:

- sigmoid:  z_k = 1 / (1 + exp(-(w_k.x + b_k)))
- relu:     z_k = max(0, w_k.x + b_k)
- reluinc:  z_k = max(abar_k, a_k) with abar_k the running mean of a_k
- rbf:      z_k = exp(-gamma_k * ||x - c_k||^2) around fixed random centers

Initialization per activation (weight std / bias): rbf 1.0 / gamma,
sigmoid 0.9 / N(0, 0.2), relu 1.0 / N(0, 0.1), reluinc 1.0 / 0.
"""

from __future__ import annotations

import numpy as np

from . import backend
from .core import Classifier, Instance, InstanceStream, Schema, encode_dense, make_schema, numeric

__all__ = [
    "ACTIVATIONS",
    "RandomFeatureFilter",
    "FilteredStream",
    "FilteredClassifier",
    "parse_filter_spec",
    "filter_for_schema",
]

ACTIVATIONS = ("sigmoid", "relu", "reluinc", "rbf")

# (weight std, bias std) per activation; rbf bias holds gamma, reluinc bias is 0
_INIT = {
    "rbf": (1.0, None),
    "sigmoid": (0.9, 0.2),
    "relu": (1.0, 0.1),
    "reluinc": (1.0, None),
}


class RandomFeatureFilter:
    """Frozen random projection of encoded input vectors.

    Weights, biases, and rbf centers are drawn once from the seed and never
    change. Only the reluinc variant carries mutable state (the running
    activation means), so every other kind is safe to share once built.
    """

    def __init__(self, seed: int, d: int, h: int, activation: str, gamma: float = 1.0):
        if d < 1 or h < 1:
            raise ValueError("d and h must be >= 1")
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}, expected one of {ACTIVATIONS}")
        if activation == "rbf" and gamma <= 0:
            raise ValueError("rbf gamma must be > 0")
        self.seed = seed
        self.d = d
        self.h = h
        self.activation = activation
        self.gamma = gamma
        rng = np.random.Generator(np.random.PCG64(seed))
        w_std, b_std = _INIT[activation]
        self.weights = rng.normal(0.0, w_std, size=(d, h))
        if activation == "rbf":
            self.bias = np.full(h, float(gamma))
            self.centers = rng.random((h, d))
        else:
            self.bias = rng.normal(0.0, b_std, size=h) if b_std else np.zeros(h)
            self.centers = None
        self.running_means = np.zeros(h) if activation == "reluinc" else None
        self._mean_count = 0

    def project(self, x: np.ndarray) -> np.ndarray:
        """Map one encoded vector of length d to the h output features."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.d,):
            raise ValueError(f"expected input of length {self.d}, got {x.shape}")
        act = self.activation
        if act == "rbf":
            return np.exp(-self.bias * backend.sq_dists(self.centers, x))
        a = backend.affine(self.weights, x, self.bias)
        if act == "sigmoid":
            return 1.0 / (1.0 + np.exp(-a))
        if act == "relu":
            return np.maximum(0.0, a)
        # reluinc: fold this activation into the running mean, then threshold
        self._mean_count += 1
        self.running_means += (a - self.running_means) / self._mean_count
        return np.maximum(self.running_means, a)


def parse_filter_spec(spec: str) -> dict:
    """Parse a filter spec string: activation[,key=value,...].

    Keys: ratio (h = ratio * d), h (absolute), gamma, seed.
    Example: "relu,ratio=10" or "rbf,h=600,gamma=0.01,seed=7".
    """
    parts = [p.strip() for p in spec.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty filter spec")
    activation = parts[0].lower()
    if activation not in ACTIVATIONS:
        raise ValueError(f"unknown filter activation {activation!r}")
    out = {"activation": activation, "ratio": None, "h": None, "gamma": 1.0, "seed": None}
    for part in parts[1:]:
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"bad filter option {part!r}, expected key=value")
        key = key.strip().lower()
        if key == "ratio":
            out["ratio"] = float(value)
        elif key == "h":
            out["h"] = int(value)
        elif key == "gamma":
            out["gamma"] = float(value)
        elif key == "seed":
            out["seed"] = int(value)
        else:
            raise ValueError(f"unknown filter option {key!r}")
    if out["ratio"] is None and out["h"] is None:
        out["ratio"] = 10.0
    return out


def spec_width(spec: dict, d: int) -> int:
    """Output width a filter spec produces for encoded input width d."""
    return spec["h"] if spec.get("h") else max(1, int(round(spec["ratio"] * d)))


def filter_for_schema(schema: Schema, spec: dict, default_seed: int = 1) -> RandomFeatureFilter:
    """Instantiate a filter sized for a schema's encoded width."""
    d = schema.encoded_width
    h = spec_width(spec, d)
    seed = spec["seed"] if spec.get("seed") is not None else default_seed
    return RandomFeatureFilter(seed, d, h, spec["activation"], spec.get("gamma", 1.0))


def _derived_schema(base: Schema, h: int) -> Schema:
    return make_schema([numeric(f"z{k}") for k in range(h)], base.class_values)


class FilteredStream(InstanceStream):
    """Applies a random feature filter to every instance of a stream.

    The derived schema has h numeric attributes and the original class
    values; labels and weights pass through untouched. Each iteration pass
    rebuilds the filter from its seed, so replay stays bit-exact.
    """

    def __init__(self, stream: InstanceStream, spec: dict, seed: int = 1):
        self.stream = stream
        self.spec = spec
        self.seed = seed
        self.h = spec_width(spec, stream.schema.encoded_width)
        self.schema = _derived_schema(stream.schema, self.h)
        self.n_instances = stream.n_instances

    def __iter__(self):
        filt = filter_for_schema(self.stream.schema, self.spec, self.seed)
        base = self.stream.schema
        for inst in self.stream:
            z = filt.project(encode_dense(base, inst.values))
            yield Instance(z, inst.label, inst.weight)


class FilteredClassifier(Classifier):
    """Puts a frozen random filter in front of any classifier.

    The inner learner is built against the derived (projected) schema. The
    projection of an instance is cached between the predict and train calls
    of the same test-then-train step.
    """

    def __init__(self, schema: Schema, filter_spec: dict, inner_factory, seed: int = 1):
        super().__init__(schema)
        self.filter_spec = dict(filter_spec)
        self.seed = seed
        self.filter = filter_for_schema(schema, filter_spec, seed)
        self.inner_schema = _derived_schema(schema, self.filter.h)
        self._inner_factory = inner_factory
        self.inner = inner_factory(self.inner_schema)
        self._cache_key = None
        self._cache_val = None

    def _projected(self, instance: Instance) -> Instance:
        if instance is self._cache_key:
            return self._cache_val
        z = self.filter.project(encode_dense(self.schema, instance.values))
        proj = Instance(z, instance.label, instance.weight)
        self._cache_key = instance
        self._cache_val = proj
        return proj

    def predict(self, instance: Instance) -> np.ndarray:
        return self.inner.predict(self._projected(instance))

    def train(self, instance: Instance, weight: float = 1.0) -> None:
        self.inner.train(self._projected(instance), weight)

    def reset(self) -> None:
        # the filter is frozen state, not learned state: keep it
        self.inner = self._inner_factory(self.inner_schema)
        self._cache_key = None
        self._cache_val = None
