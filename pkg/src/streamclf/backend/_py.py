"""Pure-numpy kernel implementations (fallback backend).

Same contract as the native extension: float64 arrays in, float64 out,
mutating kernels update their arguments in place.
"""

from __future__ import annotations

import numpy as np

NAME = "python"

_LOG_2PI = float(np.log(2.0 * np.pi))


def matmat(a, b):
    """Matrix-matrix product (the batched apply primitive)."""
    return np.asarray(a) @ np.asarray(b)


def affine(w, x, bias):
    """Pre-activation vector x @ W + bias for a d-by-h weight matrix."""
    return x @ w + bias


def sq_dists(rows, x):
    """Squared Euclidean distance from x to every row."""
    diff = rows - x
    return np.einsum("ij,ij->i", diff, diff)


def gauss_loglik(means, variances, x):
    """Per-class sum of Gaussian log-densities; variances pre-floored."""
    d = x - means
    return -0.5 * np.sum(d * d / variances + np.log(variances) + _LOG_2PI, axis=1)


def nb_votes_numeric(counts, w_sum, mean, m2, x, var_floor):
    """Full naive-Bayes vote computation for all-numeric, fully-observed
    inputs: smoothed log-prior plus per-class Gaussian log-likelihoods
    (variance floored, unseen attributes neutral, unseen classes zeroed),
    exponentiated after a max-shift."""
    C = counts.shape[0]
    total = counts.sum()
    log_votes = np.log(counts + 1.0) - np.log(total + C)
    denom = w_sum - 1.0
    with np.errstate(invalid="ignore", divide="ignore"):
        var = np.where(denom > 0, m2 / denom, 0.0)
    var = np.maximum(var, var_floor)
    d = x - mean
    terms = -0.5 * (d * d / var + np.log(var) + _LOG_2PI)
    log_votes += np.where(w_sum > 0, terms, 0.0).sum(axis=1)
    log_votes[counts <= 0] = -np.inf
    log_votes -= log_votes.max()
    return np.exp(log_votes)


def linear_scores(w, b, x):
    """Per-class linear scores W @ x + b for a C-by-d weight matrix."""
    return w @ x + b


def hinge_step(w, b, x, label, eta):
    """One-vs-all hinge sub-gradient step, in place on (w, b)."""
    scores = w @ x + b
    t = np.full(w.shape[0], -1.0)
    t[label] = 1.0
    active = t * scores < 1.0
    if np.any(active):
        step = eta * t[active]
        w[active] += step[:, None] * x
        b[active] += step


def rpn_step(v, b, vel_v, vel_b, z, delta, eta, mu):
    """Momentum SGD update of the output layer, in place.

    delta is the per-output error term (o - t) * o * (1 - o); the gradient
    of the half-MSE w.r.t. V is outer(z, delta).
    """
    vel_v *= mu
    vel_v -= eta * np.outer(z, delta)
    v += vel_v
    vel_b *= mu
    vel_b -= eta * delta
    b += vel_b
