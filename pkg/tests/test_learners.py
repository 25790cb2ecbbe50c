import math

import numpy as np
import pytest

from streamclf import (
    HoeffdingTree,
    Instance,
    KnnClassifier,
    NaiveBayes,
    SgdLinear,
    hoeffding_bound,
    make_schema,
    nominal,
    numeric,
    vote_argmax,
)
from streamclf.learners.tree import entropy, info_gain_nominal


class TestHoeffdingBound:
    def test_direct_formula(self):
        # R=1, delta=0.05, n=1 -> sqrt(ln(20)/2)
        assert hoeffding_bound(1.0, 0.05, 1) == pytest.approx(math.sqrt(math.log(20) / 2))
        assert hoeffding_bound(1.0, 0.05, 1) == pytest.approx(1.2239, abs=1e-4)

    def test_quadrupling_n_halves_eps(self):
        for r, delta, n in [(1.0, 0.05, 3), (2.5, 1e-7, 10), (3.32, 0.5, 7)]:
            assert hoeffding_bound(r, delta, 4 * n) == pytest.approx(hoeffding_bound(r, delta, n) / 2)

    def test_delta_one_gives_zero(self):
        assert hoeffding_bound(1.0, 1.0, 5) == 0.0

    def test_strictly_decreasing_in_n(self):
        values = [hoeffding_bound(1.0, 0.05, n) for n in range(1, 50)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_domain_violations(self):
        with pytest.raises(ValueError):
            hoeffding_bound(0.0, 0.05, 1)
        with pytest.raises(ValueError):
            hoeffding_bound(1.0, 0.0, 1)
        with pytest.raises(ValueError):
            hoeffding_bound(1.0, 0.05, 0)


class TestInfoGain:
    def test_perfect_split_gain_is_parent_entropy(self):
        # each class goes to its own child
        table = np.array([[50.0, 0.0], [0.0, 50.0]])
        assert info_gain_nominal(table) == pytest.approx(entropy([50, 50]))

    def test_class_independent_split_zero_gain(self):
        table = np.array([[25.0, 25.0], [25.0, 25.0]])
        assert info_gain_nominal(table) == pytest.approx(0.0)

    def test_ninety_ten_children(self):
        # 50/50 parent, equal-mass children at (90/10) and (10/90)
        table = np.array([[45.0, 5.0], [5.0, 45.0]])
        h09 = -(0.9 * math.log2(0.9) + 0.1 * math.log2(0.1))
        assert info_gain_nominal(table) == pytest.approx(1.0 - h09)
        assert info_gain_nominal(table) == pytest.approx(0.531, abs=1e-3)

    def test_gain_bounded_by_log_classes(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            table = rng.random((3, 4)) * 100
            g = info_gain_nominal(table)
            assert -1e-12 <= g <= math.log2(3) + 1e-12


def _stream_two_gaussians(rng, n, sep=4.0):
    """Two well-separated numeric classes."""
    out = []
    for _ in range(n):
        label = int(rng.random() < 0.5)
        x = rng.normal(loc=label * sep, scale=1.0, size=2)
        out.append(Instance(x, label))
    return out


class TestHoeffdingTree:
    def test_single_class_stream_never_splits(self):
        schema = make_schema([numeric("a"), numeric("b")], ["only", "other"])
        tree = HoeffdingTree(schema)
        rng = np.random.default_rng(1)
        for _ in range(10_000):
            tree.train(Instance(rng.random(2), 0))
        assert tree.n_splits == 0

    def test_separable_split_within_2000(self):
        schema = make_schema([numeric("a"), numeric("b")], ["neg", "pos"])
        tree = HoeffdingTree(schema, grace_period=200, split_confidence=1e-7)
        rng = np.random.default_rng(2)
        for i in range(2000):
            x = rng.random(2)
            label = int(x[0] > 0.5)
            tree.train(Instance(x, label))
            if tree.n_splits:
                break
        assert tree.n_splits >= 1
        # the split must be on attribute 0
        assert tree.root.attr == 0

    def test_fresh_tree_cold_start(self):
        schema = make_schema([numeric("a")], ["x", "y"])
        tree = HoeffdingTree(schema)
        votes = tree.predict(Instance(np.array([1.0]), 0))
        assert vote_argmax(votes) == 0

    def test_prediction_latency_depth_bounded(self):
        schema = make_schema([numeric("a"), numeric("b")], ["neg", "pos"])
        tree = HoeffdingTree(schema)
        rng = np.random.default_rng(3)
        for _ in range(5000):
            x = rng.random(2)
            tree.train(Instance(x, int(x[0] > 0.5)))
        assert tree.depth() <= tree.n_splits

    def test_split_gating_never_violated(self):
        schema = make_schema([numeric("a"), numeric("b")], ["neg", "pos"])
        tree = HoeffdingTree(schema, tie_threshold=0.05)
        rng = np.random.default_rng(4)
        for _ in range(20_000):
            x = rng.random(2)
            label = int(x[0] + 0.2 * rng.normal() > 0.5)
            tree.train(Instance(x, label))
        assert tree.n_splits == len(tree.split_log)
        for g1, g2, eps, tau, _n in tree.split_log:
            assert (g1 - g2 > eps) or (eps < tau)

    def test_adaptive_rule_uses_strict_inequality(self):
        schema = make_schema([numeric("a")], ["x", "y"])
        tree = HoeffdingTree(schema, leaf_strategy="nb")
        leaf = tree.root
        leaf.stats.update(np.array([0.0]), 0, 60.0)
        leaf.stats.update(np.array([1.0]), 1, 40.0)
        leaf.mc_correct = 10.0
        leaf.learner.correct = 10.0  # tie -> majority votes
        votes = tree.predict(Instance(np.array([0.9]), 0))
        assert votes.tolist() == leaf.stats.counts.tolist()
        leaf.learner.correct = 10.5  # learner ahead -> nb votes
        votes = tree.predict(Instance(np.array([0.9]), 0))
        assert votes.tolist() != leaf.stats.counts.tolist()

    def test_vote_source_flips_with_counter_order(self):
        schema = make_schema([numeric("a")], ["x", "y"])
        tree = HoeffdingTree(schema, leaf_strategy="nb")
        leaf = tree.root
        leaf.stats.update(np.array([0.0]), 0, 3.0)
        leaf.stats.update(np.array([5.0]), 1, 1.0)
        query = Instance(np.array([5.0]), 1)
        flips = []
        for mc, ln in [(5, 4), (4, 5), (6, 2), (2, 6)]:
            leaf.mc_correct, leaf.learner.correct = mc, ln
            majority = tree.predict(query).tolist() == leaf.stats.counts.tolist()
            flips.append(majority)
        assert flips == [True, False, True, False]

    def test_nominal_multiway_split(self):
        schema = make_schema([nominal("color", ["r", "g", "b"]), numeric("n")], ["0", "1"])
        tree = HoeffdingTree(schema, grace_period=50)
        rng = np.random.default_rng(5)
        for _ in range(3000):
            color = rng.integers(0, 3)
            label = int(color == 2)
            tree.train(Instance(np.array([float(color), rng.random()]), label))
        assert tree.n_splits >= 1
        assert len(tree.root.children) == 3

    def test_leaf_filter_deterministic_per_leaf(self):
        schema = make_schema([numeric("a"), numeric("b")], ["0", "1"])
        spec = {"activation": "relu", "ratio": 5.0, "h": None, "gamma": 1.0}
        t1 = HoeffdingTree(schema, leaf_strategy="sgd", leaf_filter=spec, seed=9)
        t2 = HoeffdingTree(schema, leaf_strategy="sgd", leaf_filter=spec, seed=9)
        assert np.array_equal(t1.root.learner.filter.weights, t2.root.learner.filter.weights)
        t3 = HoeffdingTree(schema, leaf_strategy="sgd", leaf_filter=spec, seed=10)
        assert not np.array_equal(t1.root.learner.filter.weights, t3.root.learner.filter.weights)

    def test_ht_knn_and_ht_sgd_train(self):
        schema = make_schema([numeric("a"), numeric("b")], ["neg", "pos"])
        rng = np.random.default_rng(6)
        for strategy in ("knn", "sgd"):
            tree = HoeffdingTree(schema, leaf_strategy=strategy, leaf_knn_window=100)
            correct = 0
            n = 3000
            for _ in range(n):
                x = rng.random(2)
                label = int(x[1] > 0.5)
                inst = Instance(x, label)
                correct += vote_argmax(tree.predict(inst)) == label
                tree.train(inst)
            assert correct / n > 0.8


class TestKnn:
    def test_nearest_point_wins(self):
        schema = make_schema([numeric("a")], ["A", "B"])
        knn = KnnClassifier(schema, k=1, window=10)
        knn.train(Instance(np.array([0.0]), 0))
        knn.train(Instance(np.array([10.0]), 1))
        votes = knn.predict(Instance(np.array([1.0]), 0))
        assert vote_argmax(votes) == 0

    def test_fifo_capacity(self):
        schema = make_schema([numeric("a")], ["A", "B"])
        knn = KnnClassifier(schema, k=1, window=2)
        for v, label in [(0.0, 0), (5.0, 1), (6.0, 1)]:
            knn.train(Instance(np.array([v]), label))
        assert knn._size == 2
        # oldest (0.0, A) evicted: nearest to 0 is now 5.0
        votes = knn.predict(Instance(np.array([0.0]), 0))
        assert vote_argmax(votes) == 1

    def test_empty_buffer_uniform(self):
        schema = make_schema([numeric("a")], ["A", "B"])
        knn = KnnClassifier(schema, k=3, window=5)
        votes = knn.predict(Instance(np.array([0.0]), 0))
        assert votes[0] == votes[1]

    def test_fewer_than_k_uses_all(self):
        schema = make_schema([numeric("a")], ["A", "B"])
        knn = KnnClassifier(schema, k=10, window=50)
        knn.train(Instance(np.array([0.0]), 0))
        knn.train(Instance(np.array([0.1]), 0))
        votes = knn.predict(Instance(np.array([0.05]), 0))
        assert votes[0] == 2.0 and votes[1] == 0.0

    def test_matches_exhaustive_scan_oracle(self):
        """5k-point buffer, 100 queries: votes equal a brute-force scan."""
        schema = make_schema([numeric(f"a{i}") for i in range(6)], ["0", "1", "2"])
        knn = KnnClassifier(schema, k=10, window=5000)
        rng = np.random.default_rng(7)
        points = rng.random((5000, 6))
        labels = rng.integers(0, 3, 5000)
        for x, y in zip(points, labels):
            knn.train(Instance(x, int(y)))
        for _ in range(100):
            q = rng.random(6)
            votes = knn.predict(Instance(q, 0))
            # oracle: stable sort over (distance, insertion order)
            d2 = ((points - q) ** 2).sum(axis=1)
            order = np.lexsort((np.arange(5000), d2))[:10]
            expected = np.bincount(labels[order], minlength=3).astype(float)
            assert np.array_equal(votes, expected)

    def test_distance_tie_prefers_older(self):
        schema = make_schema([numeric("a")], ["A", "B"])
        knn = KnnClassifier(schema, k=1, window=10)
        knn.train(Instance(np.array([1.0]), 0))  # older
        knn.train(Instance(np.array([-1.0]), 1))  # same distance from 0
        votes = knn.predict(Instance(np.array([0.0]), 0))
        assert vote_argmax(votes) == 0

    def test_eviction_across_ring_growth(self):
        schema = make_schema([numeric("a")], ["A", "B"])
        knn = KnnClassifier(schema, k=1, window=300)
        for i in range(1000):
            knn.train(Instance(np.array([float(i)]), i % 2))
        assert knn._size == 300
        # only values 700..999 remain
        votes = knn.predict(Instance(np.array([0.0]), 0))
        assert vote_argmax(votes) == 700 % 2


class TestSgd:
    def test_cold_start_argmax_zero(self):
        schema = make_schema([numeric("a")], ["x", "y", "z"])
        sgd = SgdLinear(schema)
        votes = sgd.predict(Instance(np.array([3.0]), 0))
        assert vote_argmax(votes) == 0
        assert np.all(votes == votes[0])

    def test_separable_converges(self):
        schema = make_schema([numeric("a"), numeric("b")], ["neg", "pos"])
        sgd = SgdLinear(schema, learning_rate=0.01)
        rng = np.random.default_rng(8)
        last_correct = 0
        i = 0
        while i < 10_000:
            x = rng.random(2)
            if abs(x[0] - x[1]) < 0.1:
                continue  # separable with margin
            label = int(x[0] - x[1] > 0.0)
            inst = Instance(x, label)
            if i >= 9000:
                last_correct += vote_argmax(sgd.predict(inst)) == label
            sgd.train(inst)
            i += 1
        assert last_correct / 1000 >= 0.99

    def test_no_update_when_margin_met(self):
        schema = make_schema([numeric("a")], ["x", "y"])
        sgd = SgdLinear(schema)
        sgd.weights[:] = [[10.0], [-10.0]]
        sgd.bias[:] = 0.0
        w_before = sgd.weights.copy()
        # label x, score +10 -> margin 10 >= 1: no change for class x
        # label-y side: -(-10) = 10 >= 1: no change either
        sgd.train(Instance(np.array([1.0]), 0))
        assert np.array_equal(sgd.weights, w_before)

    def test_argmax_invariant_under_constant_shift(self):
        schema = make_schema([numeric("a"), numeric("b")], ["x", "y"])
        sgd = SgdLinear(schema)
        rng = np.random.default_rng(9)
        for _ in range(100):
            x = rng.random(2)
            sgd.train(Instance(x, int(x[0] > 0.5)))
        inst = Instance(rng.random(2), 0)
        raw = sgd.weights @ np.nan_to_num(inst.values) + sgd.bias
        assert vote_argmax(sgd.predict(inst)) == vote_argmax(raw + 123.45)

    def test_nonfinite_rejected(self):
        schema = make_schema([numeric("a")], ["x", "y"])
        sgd = SgdLinear(schema)
        with pytest.raises(ValueError):
            sgd.predict(Instance(np.array([np.inf]), 0))


class TestNaiveBayes:
    def test_cold_start_uniform(self):
        schema = make_schema([numeric("a")], ["x", "y", "z"])
        nb = NaiveBayes(schema)
        votes = nb.predict(Instance(np.array([1.0]), 0))
        assert np.allclose(votes, votes[0])

    def test_separated_gaussians(self):
        schema = make_schema([numeric("a"), numeric("b")], ["neg", "pos"])
        nb = NaiveBayes(schema)
        rng = np.random.default_rng(10)
        for inst in _stream_two_gaussians(rng, 10_000):
            nb.train(inst)
        correct = sum(
            vote_argmax(nb.predict(i)) == i.label
            for i in _stream_two_gaussians(rng, 1000)
        )
        assert correct / 1000 >= 0.99

    def test_laplace_smoothing_nonzero(self):
        schema = make_schema([nominal("c", ["u", "v"]), numeric("n")], ["x", "y"])
        nb = NaiveBayes(schema)
        nb.train(Instance(np.array([0.0, 1.0]), 0))
        nb.train(Instance(np.array([0.0, 1.0]), 1))
        # value "v" never seen with class x, still a positive vote
        votes = nb.predict(Instance(np.array([1.0, 1.0]), 0))
        assert votes[0] > 0.0

    def test_mixed_nominal_numeric(self):
        schema = make_schema([nominal("c", ["u", "v"]), numeric("n")], ["x", "y"])
        nb = NaiveBayes(schema)
        rng = np.random.default_rng(11)
        for _ in range(2000):
            label = int(rng.random() < 0.5)
            c = label if rng.random() < 0.9 else 1 - label
            n = rng.normal(loc=3.0 * label)
            nb.train(Instance(np.array([float(c), n]), label))
        correct = 0
        for _ in range(500):
            label = int(rng.random() < 0.5)
            inst = Instance(np.array([float(label), 3.0 * label + rng.normal() * 0.1]), label)
            correct += vote_argmax(nb.predict(inst)) == label
        assert correct / 500 > 0.95
