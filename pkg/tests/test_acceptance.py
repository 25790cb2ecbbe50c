"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Real-dataset criteria (Electricity, CoverType, SUSY) look for files in the
STREAMCLF_DATA directory (default: <repo>/data). They run at full fidelity
when the file is present and skip with an explicit message when it is not;
this sandbox has no network access to fetch them. Everything else runs
unconditionally.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.
"""

import itertools
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy import stats as sps

from streamclf import (
    Adwin,
    FilteredClassifier,
    HoeffdingTree,
    HyperplaneGenerator,
    Instance,
    KnnClassifier,
    LedGenerator,
    NormalizedStream,
    RandomProjectionNetwork,
    RbfGenerator,
    SgdLinear,
    batched_apply,
    leveraging_bagging,
    make_schema,
    numeric,
    poisson_draw,
    prequential_run,
)
from streamclf.core import InstanceStream
from streamclf.features import parse_filter_spec
from streamclf.ingestion import open_stream

DATA_DIR = os.environ.get(
    "STREAMCLF_DATA", os.path.join(os.path.dirname(__file__), "..", "data")
)

ELEC_NAMES = ("elec.csv", "electricity.csv", "electricity-normalized.csv",
              "elecNormNew.arff", "elec.arff")
COVT_NAMES = ("covtype.csv", "covertype.csv", "covtypeNorm.arff", "covtype.arff",
              "covtype.csv.gz")
SUSY_NAMES = ("SUSY.csv", "susy.csv", "SUSY.csv.gz", "susy.csv.gz")


def _find_dataset(names):
    for name in names:
        path = os.path.join(DATA_DIR, name)
        if os.path.exists(path):
            return path
    return None


def _require_dataset(names, label):
    path = _find_dataset(names)
    if path is None:
        msg = (f"{label} dataset not available: put one of {names} in {DATA_DIR} "
               f"(or set STREAMCLF_DATA); this environment cannot download it")
        print(f"[SKIP] {label}: dataset file missing")
        pytest.skip(msg)
    return path


def _report(criterion: str, passed: bool, detail: str):
    print(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    assert passed, f"{criterion}: {detail}"


def _elec_stream():
    return open_stream(_require_dataset(ELEC_NAMES, "Electricity"))


class _SliceStream(InstanceStream):
    """First n_keep attribute columns of a base stream (for SUSY's 8 low-level
    features), optionally truncated to a prefix of the stream."""

    def __init__(self, stream, n_keep, limit=None):
        self.stream = stream
        self.n_keep = n_keep
        self.limit = limit
        base = stream.schema
        self.schema = make_schema(
            [numeric(a.name) for a in base.attributes[:n_keep]], base.class_values
        )
        self.n_instances = limit if limit is not None else stream.n_instances

    def __iter__(self):
        it = iter(self.stream)
        if self.limit is not None:
            it = itertools.islice(it, self.limit)
        for inst in it:
            yield Instance(inst.values[: self.n_keep], inst.label, inst.weight)


# ---------------------------------------------------------------------------
# Electricity criteria


class TestElectricity:
    def test_ht_accuracy_and_runtime(self):
        stream = _elec_stream()
        ht = HoeffdingTree(stream.schema, seed=1)
        _, summary = prequential_run(stream, ht, n_windows=100, model_id="ht")
        acc = 100 * summary.accuracy
        ok = abs(acc - 79.2) <= 2.0 and summary.elapsed_seconds <= 60.0
        _report("ELEC/HT", ok,
                f"accuracy={acc:.2f}% (target 79.2±2.0), runtime={summary.elapsed_seconds:.1f}s (<=60)")

    def test_lb_ht_accuracy(self):
        stream = _elec_stream()
        lb = leveraging_bagging(
            stream.schema, lambda sch, s: HoeffdingTree(sch, seed=s), n_members=10, seed=1
        )
        _, summary = prequential_run(stream, lb, n_windows=100, model_id="lb-ht")
        acc = 100 * summary.accuracy
        _report("ELEC/LB-HT", abs(acc - 89.8) <= 2.0, f"accuracy={acc:.2f}% (target 89.8±2.0)")

    def test_knn_accuracy(self):
        stream = _elec_stream()
        knn = KnnClassifier(stream.schema, k=10, window=5000)
        _, summary = prequential_run(stream, knn, n_windows=100, model_id="knn")
        acc = 100 * summary.accuracy
        _report("ELEC/kNN", abs(acc - 78.4) <= 2.0, f"accuracy={acc:.2f}% (target 78.4±2.0)")

    def test_sgd_filter_gap(self):
        stream = _elec_stream()
        sgd = SgdLinear(stream.schema, learning_rate=0.01)
        _, plain = prequential_run(stream, sgd, n_windows=100, model_id="sgd")
        spec = parse_filter_spec("relu,ratio=10,seed=42")
        sgd_f = FilteredClassifier(stream.schema, spec, lambda sch: SgdLinear(sch, 0.01), seed=42)
        _, filtered = prequential_run(stream, sgd_f, n_windows=100, model_id="sgd-f")
        gap = 100 * (filtered.accuracy - plain.accuracy)
        _report(
            "ELEC/SGD-F vs SGD",
            gap >= 10.0,
            f"sgd={100 * plain.accuracy:.2f}% sgd-f={100 * filtered.accuracy:.2f}% gap={gap:.2f} (>=10)",
        )

    def test_rpn_sigmoid_best_config(self):
        stream = NormalizedStream(_elec_stream())
        net = RandomProjectionNetwork(stream.schema, 100, "sigmoid", eta=0.11, mu=0.3, seed=1)
        _, summary = prequential_run(stream, net, n_windows=100, model_id="rpn")
        acc = 100 * summary.accuracy
        _report("ELEC/RPN sigmoid h=100", abs(acc - 85.33) <= 2.0,
                f"accuracy={acc:.2f}% (target 85.33±2.0)")


# ---------------------------------------------------------------------------
# CoverType criterion


class TestCoverType:
    def test_rpn_relu_normalized(self):
        path = _require_dataset(COVT_NAMES, "CoverType")
        stream = NormalizedStream(open_stream(path))
        net = RandomProjectionNetwork(stream.schema, 2000, "relu", eta=0.01, mu=0.4, seed=1)
        _, summary = prequential_run(stream, net, n_windows=100, model_id="rpn-relu")
        acc = 100 * summary.accuracy
        ok = abs(acc - 94.59) <= 2.0 and summary.elapsed_seconds <= 900.0
        _report("COVT/RPN relu h=2000", ok,
                f"accuracy={acc:.2f}% (target 94.59±2.0), runtime={summary.elapsed_seconds:.0f}s (<=900)")


# ---------------------------------------------------------------------------
# LED criterion (synthetic: always runs)


class TestLed:
    def test_ht_on_led_100k(self):
        gen = LedGenerator(seed=1, noise=0.1)
        ht = HoeffdingTree(gen.schema, seed=1)
        _, summary = prequential_run(gen, ht, max_instances=100_000, n_windows=100,
                                     model_id="ht")
        acc = 100 * summary.accuracy
        _report("LED1/HT", abs(acc - 73.1) <= 2.5, f"accuracy={acc:.2f}% (target 73.1±2.5)")


# ---------------------------------------------------------------------------
# SUSY desk-scale criteria


class TestSusy:
    N_FEATURES = 8       # the 8 low-level kinematic features
    PREFIX = 500_000     # full 5M runs are out of desk budget by design

    def _stream(self, limit):
        path = _require_dataset(SUSY_NAMES, "SUSY")
        base = open_stream(path, class_column=0)
        return _SliceStream(base, self.N_FEATURES, limit=limit)

    def test_ordinal_ordering_500k(self):
        accs = {}
        stream = self._stream(self.PREFIX)
        lb = leveraging_bagging(stream.schema, lambda sch, s: HoeffdingTree(sch, seed=s),
                                n_members=10, seed=1)
        accs["lb-ht"] = prequential_run(stream, lb, n_windows=100)[1].accuracy
        stream = self._stream(self.PREFIX)
        accs["ht"] = prequential_run(stream, HoeffdingTree(stream.schema, seed=1),
                                     n_windows=100)[1].accuracy
        stream = self._stream(self.PREFIX)
        spec = parse_filter_spec("relu,ratio=10,seed=42")
        sgdf = FilteredClassifier(stream.schema, spec, lambda sch: SgdLinear(sch, 0.01), seed=42)
        accs["sgd-f"] = prequential_run(stream, sgdf, n_windows=100)[1].accuracy
        stream = self._stream(self.PREFIX)
        accs["sgd"] = prequential_run(stream, SgdLinear(stream.schema, 0.01),
                                      n_windows=100)[1].accuracy
        slack = 0.015
        order = ["lb-ht", "ht", "sgd-f", "sgd"]
        ok = all(accs[a] >= accs[b] - slack for a, b in zip(order, order[1:]))
        _report("SUSY ordinal (500k)", ok,
                " ".join(f"{k}={100 * v:.2f}%" for k, v in accs.items()) + " (each step ±1.5pt)")

    def test_sgd_f_nondecreasing_in_h(self):
        accs = []
        for ratio in (1, 10, 100):
            stream = self._stream(10_000)
            spec = parse_filter_spec(f"relu,ratio={ratio},seed=42")
            sgdf = FilteredClassifier(stream.schema, spec,
                                      lambda sch: SgdLinear(sch, 0.01), seed=42)
            accs.append(prequential_run(stream, sgdf, n_windows=10)[1].accuracy)
        ok = accs[0] <= accs[1] <= accs[2]
        _report("SUSY SGD-F vs h (10k)", ok,
                "h/d=1,10,100 -> " + ", ".join(f"{100 * a:.2f}%" for a in accs))


# ---------------------------------------------------------------------------
# Property suite (no paper numbers needed; always runs)


class TestPropertySuite:
    def test_split_gating_one_million_steps(self):
        """Hoeffding gating honored over 1e6 instrumented training steps."""
        steps = 0
        splits = 0
        configs = [
            (LedGenerator(seed=2, noise=0.1), "nb", 250_000),
            (RbfGenerator(seed=3, n_attributes=10, n_classes=4), "mc", 450_000),
            (HyperplaneGenerator(seed=4, noise=0.05), "mc", 300_000),
        ]
        for gen, strategy, budget in configs:
            tree = HoeffdingTree(gen.schema, leaf_strategy=strategy, seed=1)
            for inst in itertools.islice(iter(gen), budget):
                tree.train(inst)
            steps += budget
            splits += tree.n_splits
            assert tree.n_splits == len(tree.split_log)
            for g1, g2, eps, tau, _n in tree.split_log:
                assert (g1 - g2 > eps) or (eps < tau), "split gate violated"
        _report("property/split-gating", steps >= 1_000_000,
                f"{steps} training steps, {splits} splits, zero gate violations")

    @pytest.mark.parametrize("lam", [1.0, 6.0])
    def test_poisson_pmf_chi_square(self, lam):
        rng = np.random.Generator(np.random.PCG64(5))
        n = 100_000
        draws = np.array([poisson_draw(rng, lam) for _ in range(n)])
        kmax = int(draws.max())
        observed = np.bincount(draws, minlength=kmax + 1).astype(float)
        pmf = np.array([math.exp(-lam) * lam ** k / math.factorial(k)
                        for k in range(kmax + 1)])
        cut = int(np.searchsorted(np.cumsum(pmf), 1.0 - 1e-4))
        obs = np.append(observed[:cut], observed[cut:].sum())
        exp = np.append(pmf[:cut], 1.0 - pmf[:cut].sum()) * n
        p = sps.chisquare(obs, exp).pvalue
        _report(f"property/poisson lambda={lam}", p > 0.01,
                f"chi-square p={p:.4f} over {n} draws (pass at 1%)")

    def test_knn_equals_bruteforce_on_1000_queries(self):
        schema = make_schema([numeric(f"a{i}") for i in range(8)], ["0", "1", "2"])
        knn = KnnClassifier(schema, k=10, window=5000)
        rng = np.random.default_rng(6)
        points = rng.random((5000, 8))
        labels = rng.integers(0, 3, 5000)
        for x, y in zip(points, labels):
            knn.train(Instance(x, int(y)))
        mismatches = 0
        for _ in range(1000):
            q = rng.random(8)
            votes = knn.predict(Instance(q, 0))
            d2 = ((points - q) ** 2).sum(axis=1)
            nearest = np.lexsort((np.arange(5000), d2))[:10]
            expected = np.bincount(labels[nearest], minlength=3).astype(float)
            mismatches += not np.array_equal(votes, expected)
        _report("property/knn-oracle", mismatches == 0,
                f"{mismatches} mismatches over 1000 queries vs exhaustive scan")

    def test_rpn_gradient_check(self):
        from conftest import gradient_check

        worst, checked = gradient_check(seed=7, n_configs=100)
        _report("property/rpn-gradient", worst < 1e-5 and checked > 0,
                f"max relative error {worst:.2e} over 100 configs,"
                f" {checked} entries (< 1e-5)")

    def test_adwin_detects_switch_within_500(self):
        rng = np.random.Generator(np.random.PCG64(8))
        det = Adwin(delta=0.002)
        for _ in range(2000):
            det.update(float(rng.random() < 0.2))
        detected_at = None
        for i in range(2000):
            if det.update(float(rng.random() < 0.8)):
                detected_at = i + 1
                break
        ok = detected_at is not None and detected_at <= 500
        _report("property/adwin-detect", ok,
                f"0.2->0.8 switch flagged after {detected_at} samples (<=500)")

    def test_adwin_false_positives_bounded(self):
        rng = np.random.Generator(np.random.PCG64(9))
        det = Adwin(delta=0.002)
        detections = sum(det.update(float(rng.random() < 0.5)) for _ in range(100_000))
        _report("property/adwin-false-positives", detections <= 10,
                f"{detections} detections on stationary Bernoulli(0.5) 1e5 stream (<=10)")

    def test_batched_apply_matches_naive(self):
        rng = np.random.default_rng(10)
        m = rng.standard_normal((512, 512))
        vecs = rng.standard_normal((64, 512))
        fast = batched_apply(m, vecs)
        naive = np.empty((64, 512))
        for i in range(64):
            for j in range(512):
                naive[i, j] = float(np.dot(vecs[i], m[:, j]))
        rel = (np.abs(fast - naive) / np.maximum(np.abs(naive), 1e-300)).max()
        _report("property/batched-apply", rel < 1e-10,
                f"max relative deviation {rel:.2e} vs naive triple loop (< 1e-10)")

    def test_generators_bit_reproducible(self):
        gens = [
            lambda: RbfGenerator(seed=11, drift_speed=0.001),
            lambda: HyperplaneGenerator(seed=12, noise=0.05, mag_change=0.001),
            lambda: LedGenerator(seed=13, noise=0.1),
        ]
        ok = True
        for make in gens:
            a = [(inst.values.tobytes(), inst.label)
                 for inst in itertools.islice(iter(make()), 2000)]
            b = [(inst.values.tobytes(), inst.label)
                 for inst in itertools.islice(iter(make()), 2000)]
            ok &= a == b
        _report("property/generator-reproducibility", ok,
                "all three generators replay bit-exactly under fixed seed")

    def test_experiments_bit_reproducible(self, tmp_path):
        cmd = [
            sys.executable, "-m", "streamclf.cli", "run",
            "--stream", "gen:rbf?seed=21&drift=0.001", "--model", "lb(ht,5,6)",
            "--max", "3000", "--windows", "10", "--seed", "33",
        ]
        outs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            proc = subprocess.run(cmd + ["--out", str(out)], capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
            rows = out.read_text().splitlines()
            outs.append([",".join(r.split(",")[:5]) for r in rows])  # drop elapsed column
        _report("property/experiment-reproducibility", outs[0] == outs[1],
                "accuracy columns bit-identical across reruns of the same config+seed")
