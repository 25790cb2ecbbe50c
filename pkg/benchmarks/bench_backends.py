#!/usr/bin/env python3
"""Benchmark the native kernel extension against the numpy fallback.

Per-kernel micro-benchmarks on representative shapes, plus an end-to-end
prequential run on a synthetic stream under each backend. Run after
building the extension:

    python3 benchmarks/bench_backends.py [--instances 20000]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from streamclf.backend import _py

try:
    from streamclf.backend import _native
except ImportError:
    _native = None


def bench(fn, *args, repeat=200):
    fn(*args)  # warm up
    start = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - start) / repeat


def kernel_benchmarks():
    rng = np.random.default_rng(0)
    cases = [
        ("affine 54x2000 (covtype rpn forward)",
         "affine", (rng.standard_normal((54, 2000)), rng.standard_normal(54),
                    rng.standard_normal(2000))),
        ("affine 8x80 (elec sgd-f)",
         "affine", (rng.standard_normal((8, 80)), rng.standard_normal(8),
                    rng.standard_normal(80))),
        ("sq_dists 5000x8 (knn buffer scan)",
         "sq_dists", (rng.standard_normal((5000, 8)), rng.standard_normal(8))),
        ("gauss_loglik 10x24 (nb leaf)",
         "gauss_loglik", (rng.standard_normal((10, 24)), rng.random((10, 24)) + 0.01,
                          rng.standard_normal(24))),
        ("nb_votes_numeric 2x8 (ht adaptive leaf)",
         "nb_votes_numeric", (rng.random(2) * 100, rng.random((2, 8)) * 50,
                              rng.standard_normal((2, 8)), rng.random((2, 8)) * 5,
                              rng.standard_normal(8), 1e-12)),
        ("linear_scores 7x2000",
         "linear_scores", (rng.standard_normal((7, 2000)), rng.standard_normal(7),
                           rng.standard_normal(2000))),
        ("matmat 64x512 @ 512x512 (batched apply)",
         "matmat", (rng.standard_normal((64, 512)), rng.standard_normal((512, 512)))),
    ]
    print(f"{'kernel':45s} {'numpy':>12s} {'native':>12s} {'speedup':>9s}")
    for label, name, args in cases:
        t_py = bench(getattr(_py, name), *args)
        if _native is None:
            print(f"{label:45s} {t_py * 1e6:10.1f}us {'n/a':>12s} {'':>9s}")
            continue
        t_nat = bench(getattr(_native, name), *args)
        print(f"{label:45s} {t_py * 1e6:10.1f}us {t_nat * 1e6:10.1f}us {t_py / t_nat:8.2f}x")


END_TO_END = """
import time
from streamclf import LedGenerator, RbfGenerator, HoeffdingTree, KnnClassifier
from streamclf import RandomProjectionNetwork, prequential_run
cases = [
    ("ht on led", LedGenerator(seed=1, noise=0.1), lambda s: HoeffdingTree(s)),
    ("knn(10,5000) on rbf", RbfGenerator(seed=1), lambda s: KnnClassifier(s)),
    ("rpn(relu,500) on rbf", RbfGenerator(seed=1),
     lambda s: RandomProjectionNetwork(s, 500, "relu", eta=0.01, mu=0.4)),
]
for label, stream, make in cases:
    model = make(stream.schema)
    _, summary = prequential_run(stream, model, max_instances={n}, n_windows=10)
    print(f"{{label}}|{{summary.elapsed_seconds:.2f}}|{{summary.accuracy:.4f}}")
"""


def end_to_end(n_instances):
    rows = {}
    backends = ["python"] + (["native"] if _native is not None else [])
    for backend in backends:
        env = dict(os.environ, STREAMCLF_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, "-c", END_TO_END.format(n=n_instances)],
            env=env, capture_output=True, text=True, check=True,
        )
        for line in proc.stdout.strip().splitlines():
            label, secs, acc = line.split("|")
            rows.setdefault(label, {})[backend] = (float(secs), acc)
    print(f"\nend-to-end, {n_instances} instances per run:")
    print(f"{'pipeline':25s} {'numpy':>10s} {'native':>10s} {'speedup':>9s} {'acc(py/nat)':>16s}")
    for label, per in rows.items():
        t_py, acc_py = per["python"]
        if "native" in per:
            t_nat, acc_nat = per["native"]
            print(f"{label:25s} {t_py:9.2f}s {t_nat:9.2f}s {t_py / t_nat:8.2f}x"
                  f" {acc_py}/{acc_nat:>7s}")
        else:
            print(f"{label:25s} {t_py:9.2f}s {'n/a':>10s}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instances", type=int, default=20000,
                        help="stream length for the end-to-end comparison")
    args = parser.parse_args()
    if _native is None:
        print("note: native extension not built; showing numpy fallback only\n")
    kernel_benchmarks()
    end_to_end(args.instances)
