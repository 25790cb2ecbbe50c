import numpy as np
import pytest

from streamclf import Instance, RandomProjectionNetwork, make_schema, nominal, numeric


@pytest.fixture
def two_numeric_schema():
    return make_schema([numeric("a"), numeric("b")], ["neg", "pos"])


@pytest.fixture
def mixed_schema():
    return make_schema([numeric("a"), nominal("b", ["x", "y", "z"])], ["c0", "c1"])


def make_instances(xs, labels):
    return [Instance(np.asarray(x, dtype=float), y) for x, y in zip(xs, labels)]


def gradient_check(seed: int, n_configs: int):
    """Analytic output-layer gradient vs central finite differences.

    The finite differences run in extended precision with the projection
    captured once (only the output layer has a gradient). Relative error is
    evaluated on every weight and bias entry whose finite difference exceeds
    1e-5, two orders of magnitude above the oracle's noise floor; smaller
    entries make a relative comparison ill-posed.

    Returns (worst relative error, number of entries compared).
    """
    rng = np.random.default_rng(seed)
    eps = np.longdouble(1e-6)
    worst = 0.0
    checked = 0
    for trial in range(n_configs):
        act = ("sigmoid", "relu", "reluinc", "rbf")[trial % 4]
        d, C, h = int(rng.integers(2, 6)), int(rng.integers(2, 5)), int(rng.integers(3, 10))
        schema = make_schema([numeric(f"a{i}") for i in range(d)],
                             [str(c) for c in range(C)])
        net = RandomProjectionNetwork(schema, h, act, eta=0.01, mu=0.0,
                                      gamma=float(rng.uniform(0.01, 2.0)),
                                      seed=int(rng.integers(1, 10_000)))
        x = rng.normal(size=d) * 0.5
        target = np.zeros(C)
        target[int(rng.integers(0, C))] = 1.0
        z = net.random_layer.project(x).astype(np.longdouble)
        t_hp = target.astype(np.longdouble)
        w0 = net.out_weights.astype(np.longdouble)
        b0 = net.out_bias.astype(np.longdouble)
        o = 1.0 / (1.0 + np.exp(-(z @ w0 + b0)))
        delta = (o - t_hp) * o * (1 - o)
        analytic_w = np.outer(z, delta)
        analytic_b = delta

        def mse(weights, bias):
            out = 1.0 / (1.0 + np.exp(-(z @ weights + bias)))
            return 0.5 * ((out - t_hp) ** 2).sum()

        for i in range(h):
            for j in range(C):
                w = w0.copy()
                w[i, j] += eps
                up = mse(w, b0)
                w[i, j] -= 2 * eps
                down = mse(w, b0)
                fd = (up - down) / (2 * eps)
                if abs(fd) >= 1e-5:
                    worst = max(worst, float(abs(analytic_w[i, j] - fd) / abs(fd)))
                    checked += 1
        for j in range(C):
            b = b0.copy()
            b[j] += eps
            up = mse(w0, b)
            b[j] -= 2 * eps
            down = mse(w0, b)
            fd = (up - down) / (2 * eps)
            if abs(fd) >= 1e-5:
                worst = max(worst, float(abs(analytic_b[j] - fd) / abs(fd)))
                checked += 1
    return worst, checked
