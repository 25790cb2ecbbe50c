# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Native kernel implementations: fused per-instance loops without numpy
temporaries. Mirrors the contract of the numpy fallback in _py.py."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log, sqrt

cnp.import_array()

NAME = "native"

cdef double _LOG_2PI = 1.8378770664093453


def matmat(a, b):
    """Matrix-matrix product (the batched apply primitive)."""
    cdef double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0], k = A.shape[1], m = B.shape[1]
    if B.shape[0] != k:
        raise ValueError("shape mismatch")
    out = np.zeros((n, m))
    cdef double[:, ::1] O = out
    cdef Py_ssize_t i, j, p
    cdef double aij
    with nogil:
        for i in range(n):
            for p in range(k):
                aij = A[i, p]
                if aij != 0.0:
                    for j in range(m):
                        O[i, j] += aij * B[p, j]
    return out


def affine(w, x, bias):
    """Pre-activation vector x @ W + bias for a d-by-h weight matrix."""
    cdef double[:, ::1] W = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] X = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] B = np.ascontiguousarray(bias, dtype=np.float64)
    cdef Py_ssize_t d = W.shape[0], h = W.shape[1]
    if X.shape[0] != d or B.shape[0] != h:
        raise ValueError("shape mismatch")
    out = np.empty(h)
    cdef double[::1] O = out
    cdef Py_ssize_t i, k
    cdef double xi
    with nogil:
        for k in range(h):
            O[k] = B[k]
        for i in range(d):
            xi = X[i]
            if xi != 0.0:
                for k in range(h):
                    O[k] += xi * W[i, k]
    return out


def sq_dists(rows, x):
    """Squared Euclidean distance from x to every row."""
    cdef double[:, ::1] R = np.ascontiguousarray(rows, dtype=np.float64)
    cdef double[::1] X = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = R.shape[0], d = R.shape[1]
    if X.shape[0] != d:
        raise ValueError("shape mismatch")
    out = np.empty(n)
    cdef double[::1] O = out
    cdef Py_ssize_t i, j
    cdef double acc, diff
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(d):
                diff = R[i, j] - X[j]
                acc += diff * diff
            O[i] = acc
    return out


def gauss_loglik(means, variances, x):
    """Per-class sum of Gaussian log-densities; variances pre-floored."""
    cdef double[:, ::1] M = np.ascontiguousarray(means, dtype=np.float64)
    cdef double[:, ::1] V = np.ascontiguousarray(variances, dtype=np.float64)
    cdef double[::1] X = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t C = M.shape[0], d = M.shape[1]
    if V.shape[0] != C or V.shape[1] != d or X.shape[0] != d:
        raise ValueError("shape mismatch")
    out = np.empty(C)
    cdef double[::1] O = out
    cdef Py_ssize_t c, j
    cdef double acc, diff, var
    with nogil:
        for c in range(C):
            acc = 0.0
            for j in range(d):
                var = V[c, j]
                diff = X[j] - M[c, j]
                acc += diff * diff / var + log(var) + _LOG_2PI
            O[c] = -0.5 * acc
    return out


def nb_votes_numeric(counts, w_sum, mean, m2, x, var_floor):
    """Full naive-Bayes vote computation for all-numeric, fully-observed
    inputs; mirrors the numpy fallback."""
    cdef double[::1] N = counts
    cdef double[:, ::1] W = w_sum
    cdef double[:, ::1] M = mean
    cdef double[:, ::1] S = m2
    cdef double[::1] X = np.ascontiguousarray(x, dtype=np.float64)
    cdef double floor = var_floor
    cdef Py_ssize_t C = N.shape[0], d = W.shape[1]
    if M.shape[0] != C or M.shape[1] != d or S.shape[0] != C or S.shape[1] != d or X.shape[0] != d:
        raise ValueError("shape mismatch")
    out = np.empty(C)
    cdef double[::1] O = out
    cdef Py_ssize_t c, j
    cdef double total = 0.0, acc, wcj, var, diff, best
    cdef bint any_included = False
    with nogil:
        for c in range(C):
            total += N[c]
        for c in range(C):
            acc = log(N[c] + 1.0) - log(total + C)
            for j in range(d):
                wcj = W[c, j]
                if wcj > 0.0:
                    if wcj > 1.0:
                        var = S[c, j] / (wcj - 1.0)
                    else:
                        var = 0.0
                    if var < floor:
                        var = floor
                    diff = X[j] - M[c, j]
                    acc += -0.5 * (diff * diff / var + log(var) + _LOG_2PI)
            O[c] = acc
        best = 0.0
        for c in range(C):
            if N[c] > 0.0 and (not any_included or O[c] > best):
                best = O[c]
                any_included = True
        for c in range(C):
            if N[c] > 0.0:
                O[c] = exp(O[c] - best)
            else:
                O[c] = 0.0
    return out


def linear_scores(w, b, x):
    """Per-class linear scores W @ x + b for a C-by-d weight matrix."""
    cdef double[:, ::1] W = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] X = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t C = W.shape[0], d = W.shape[1]
    if B.shape[0] != C or X.shape[0] != d:
        raise ValueError("shape mismatch")
    out = np.empty(C)
    cdef double[::1] O = out
    cdef Py_ssize_t c, j
    cdef double acc
    with nogil:
        for c in range(C):
            acc = B[c]
            for j in range(d):
                acc += W[c, j] * X[j]
            O[c] = acc
    return out


def hinge_step(w, b, x, label, eta):
    """One-vs-all hinge sub-gradient step, in place on (w, b)."""
    cdef double[:, ::1] W = w
    cdef double[::1] B = b
    cdef double[::1] X = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t C = W.shape[0], d = W.shape[1]
    cdef Py_ssize_t lab = label
    cdef double e = eta
    if B.shape[0] != C or X.shape[0] != d:
        raise ValueError("shape mismatch")
    cdef Py_ssize_t c, j
    cdef double acc, t, step
    with nogil:
        for c in range(C):
            acc = B[c]
            for j in range(d):
                acc += W[c, j] * X[j]
            t = 1.0 if c == lab else -1.0
            if t * acc < 1.0:
                step = e * t
                for j in range(d):
                    W[c, j] += step * X[j]
                B[c] += step
    return None


def rpn_step(v, b, vel_v, vel_b, z, delta, eta, mu):
    """Momentum SGD update of the output layer, in place."""
    cdef double[:, ::1] V = v
    cdef double[::1] B = b
    cdef double[:, ::1] VV = vel_v
    cdef double[::1] VB = vel_b
    cdef double[::1] Z = np.ascontiguousarray(z, dtype=np.float64)
    cdef double[::1] D = np.ascontiguousarray(delta, dtype=np.float64)
    cdef Py_ssize_t h = V.shape[0], C = V.shape[1]
    cdef double e = eta, m = mu
    if VV.shape[0] != h or VV.shape[1] != C or Z.shape[0] != h or D.shape[0] != C:
        raise ValueError("shape mismatch")
    cdef Py_ssize_t k, c
    cdef double zk
    with nogil:
        for k in range(h):
            zk = Z[k]
            for c in range(C):
                VV[k, c] = m * VV[k, c] - e * zk * D[c]
                V[k, c] += VV[k, c]
        for c in range(C):
            VB[c] = m * VB[c] - e * D[c]
            B[c] += VB[c]
    return None
