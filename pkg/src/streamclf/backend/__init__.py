"""Compute backend selection.

Two implementations of the same kernel contract exist: a Cython extension
(_native) and a pure-numpy fallback (_py). They agree within reordering
tolerance (1e-10 relative), so accuracy results match across backends.

The default composition routes each kernel to whichever side measures
faster (see benchmarks/bench_backends.py): the fused per-instance kernels
(sq_dists, gauss_loglik, hinge_step, rpn_step) go native because they avoid
numpy temporaries and call overhead; the dense linear algebra (matmat,
affine, linear_scores) stays on numpy's BLAS, which beats naive loops at
these shapes.

STREAMCLF_BACKEND=python forces the pure fallback everywhere;
=native requires the extension and uses it for every kernel.
"""

import os

from . import _py

_forced = os.environ.get("STREAMCLF_BACKEND", "").lower()

if _forced == "python":
    _native = None
elif _forced == "native":
    from . import _native  # noqa: F401  (ImportError if not built)
else:
    try:
        from . import _native
    except ImportError:
        _native = None

if _native is None:
    NAME = "python"
    matmat = _py.matmat
    affine = _py.affine
    linear_scores = _py.linear_scores
    sq_dists = _py.sq_dists
    gauss_loglik = _py.gauss_loglik
    nb_votes_numeric = _py.nb_votes_numeric
    hinge_step = _py.hinge_step
    rpn_step = _py.rpn_step
elif _forced == "native":
    NAME = "native"
    matmat = _native.matmat
    affine = _native.affine
    linear_scores = _native.linear_scores
    sq_dists = _native.sq_dists
    gauss_loglik = _native.gauss_loglik
    nb_votes_numeric = _native.nb_votes_numeric
    hinge_step = _native.hinge_step
    rpn_step = _native.rpn_step
else:
    NAME = "native+blas"
    matmat = _py.matmat
    affine = _py.affine
    linear_scores = _py.linear_scores
    sq_dists = _native.sq_dists
    gauss_loglik = _native.gauss_loglik
    nb_votes_numeric = _native.nb_votes_numeric
    hinge_step = _native.hinge_step
    rpn_step = _native.rpn_step

__all__ = [
    "NAME",
    "matmat",
    "affine",
    "sq_dists",
    "gauss_loglik",
    "nb_votes_numeric",
    "linear_scores",
    "hinge_step",
    "rpn_step",
]
