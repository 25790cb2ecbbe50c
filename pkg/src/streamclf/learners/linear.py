"""Online linear classifier trained by one-vs-all hinge-loss SGD."""

from __future__ import annotations

import numpy as np

from .. import backend
from ..core import Classifier, Instance, Schema, encode_dense

__all__ = ["SgdLinear"]


class SgdLinear(Classifier):
    """Per-class linear scores s_c = w_c . x + b_c over encoded attributes.

    Training takes a sub-gradient step on the hinge loss for every class:
    with target t = +1 for the true class and -1 otherwise, any class with
    t * s_c < 1 gets w_c += eta * t * x and b_c += eta * t (scaled by the
    instance weight). Untrained models score all classes equally.
    """

    def __init__(self, schema: Schema, learning_rate: float = 0.01):
        super().__init__(schema)
        if learning_rate <= 0:
            raise ValueError("learning rate must be > 0")
        self.learning_rate = learning_rate
        d = schema.encoded_width
        self.weights = np.zeros((schema.n_classes, d))
        self.bias = np.zeros(schema.n_classes)

    def predict(self, instance: Instance) -> np.ndarray:
        if np.isinf(instance.values).any():
            raise ValueError("non-finite input features")
        x = encode_dense(self.schema, instance.values)
        scores = backend.linear_scores(self.weights, self.bias, x)
        return scores - scores.min()  # shift raw scores into vote range

    def train(self, instance: Instance, weight: float = 1.0) -> None:
        if np.isinf(instance.values).any():
            raise ValueError("non-finite input features")
        x = encode_dense(self.schema, instance.values)
        eta = self.learning_rate * weight * instance.weight
        backend.hinge_step(self.weights, self.bias, x, instance.label, eta)

    def reset(self) -> None:
        self.weights[:] = 0.0
        self.bias[:] = 0.0
