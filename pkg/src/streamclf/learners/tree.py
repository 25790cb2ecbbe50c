"""Hoeffding tree with pluggable adaptive leaves.

A leaf collects class-conditional statistics and, every ``grace_period``
instances, compares the information gain of the best and second-best split
candidates. It splits only when the gap beats the Hoeffding bound
eps = sqrt(R^2 ln(1/delta) / 2n) (or the bound has shrunk below the tie
threshold). Leaves can host an embedded learner (naive Bayes, kNN, or SGD,
optionally behind a leaf-local random filter); its prediction is used only
while its running leaf-local accuracy beats the majority class.
"""

from __future__ import annotations

import math

import numpy as np

from ..core import Classifier, Instance, Schema, encode_dense, make_schema, numeric, vote_argmax
from ..features import RandomFeatureFilter
from .bayes import SufficientStats
from .linear import SgdLinear
from .neighbors import KnnClassifier

__all__ = ["HoeffdingTree", "hoeffding_bound", "info_gain_numeric", "info_gain_nominal", "entropy"]

LEAF_STRATEGIES = ("mc", "nb", "knn", "sgd")
N_SPLIT_POINTS = 10


def hoeffding_bound(value_range: float, delta: float, n: float) -> float:
    """Deviation bound for a mean of n observations with the given range."""
    if value_range <= 0:
        raise ValueError("range must be > 0")
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must be in (0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.sqrt(value_range * value_range * math.log(1.0 / delta) / (2.0 * n))


def entropy(dist) -> float:
    """Shannon entropy in bits of an unnormalized class distribution."""
    dist = np.asarray(dist, dtype=np.float64)
    total = dist.sum()
    if total <= 0:
        return 0.0
    p = dist[dist > 0] / total
    return float(-(p * np.log2(p)).sum())


def _split_entropy(children) -> float:
    """Weight-averaged entropy of child distributions (rows)."""
    masses = children.sum(axis=1)
    total = masses.sum()
    if total <= 0:
        return 0.0
    return sum(
        (m / total) * entropy(row) for m, row in zip(masses, children) if m > 0
    )


def info_gain_nominal(table: np.ndarray) -> float:
    """Info gain of the multiway split defined by a (class x value) table."""
    parent = table.sum(axis=1)
    return entropy(parent) - _split_entropy(table.T)


def info_gain_numeric(parent_dist, lhs, rhs) -> float:
    """Info gain of a binary threshold split with estimated child masses."""
    children = np.stack([lhs, rhs])
    return entropy(parent_dist) - _split_entropy(children)


def _gauss_cdf(x: float, mean: float, std: float) -> float:
    return 0.5 * (1.0 + math.erf((x - mean) / (std * math.sqrt(2.0))))


def _rows_entropy(rows: np.ndarray) -> np.ndarray:
    """Entropy in bits of each row of an unnormalized distribution matrix."""
    totals = rows.sum(axis=1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        p = rows / totals
        h = np.where(rows > 0, -p * np.log2(p), 0.0).sum(axis=1)
    return np.where(totals[:, 0] > 0, h, 0.0)


def _best_numeric_split(stats: SufficientStats, pos: int, variances: np.ndarray):
    """Best threshold on the numeric attribute at column ``pos``.

    Child distributions are projected from the per-class Gaussian fits at
    10 evenly spaced candidate thresholds strictly between the observed
    min and max. Returns (gain, threshold, lhs, rhs) or None.
    """
    lo, hi = stats.amin[pos], stats.amax[pos]
    if not (hi > lo):
        return None
    w = stats.w_sum[:, pos]
    total = w.sum()
    if total <= 0:
        return None
    means = stats.mean[:, pos]
    stds = np.sqrt(variances[:, pos])
    C = len(w)
    steps = np.arange(1, N_SPLIT_POINTS + 1) / (N_SPLIT_POINTS + 1)
    thresholds = lo + (hi - lo) * steps
    cdf = np.empty((N_SPLIT_POINTS, C))
    for c in range(C):
        if w[c] <= 0:
            cdf[:, c] = 0.0
        elif stds[c] > 0:
            for i, t in enumerate(thresholds):
                cdf[i, c] = _gauss_cdf(t, means[c], stds[c])
        else:
            cdf[:, c] = (means[c] <= thresholds).astype(np.float64)
    lhs = cdf * w
    rhs = w - lhs
    l_mass = lhs.sum(axis=1)
    r_mass = rhs.sum(axis=1)
    gains = (
        entropy(w)
        - (l_mass / total) * _rows_entropy(lhs)
        - (r_mass / total) * _rows_entropy(rhs)
    )
    i = int(np.argmax(gains))
    return float(gains[i]), float(thresholds[i]), lhs[i], rhs[i]


class _LeafLearner:
    """Embedded leaf model plus its leaf-local prequential counters."""

    __slots__ = ("kind", "model", "filter", "correct", "schema")

    def __init__(self, kind, model=None, filt=None):
        self.kind = kind
        self.model = model
        self.filter = filt
        self.correct = 0.0


class _Leaf:
    __slots__ = (
        "stats",
        "learner",
        "mc_correct",
        "weight_at_last_attempt",
        "leaf_id",
    )

    def __init__(self, stats, learner, leaf_id, weight_seen=0.0):
        self.stats = stats
        self.learner = learner
        self.mc_correct = 0.0
        self.weight_at_last_attempt = weight_seen
        self.leaf_id = leaf_id


class _NumericSplit:
    __slots__ = ("attr", "threshold", "children")

    def __init__(self, attr, threshold, children):
        self.attr = attr
        self.threshold = threshold
        self.children = children

    def route(self, values) -> int:
        v = values[self.attr]
        # missing values take the first branch
        return 0 if (math.isnan(v) or v <= self.threshold) else 1


class _NominalSplit:
    __slots__ = ("attr", "children")

    def __init__(self, attr, children):
        self.attr = attr
        self.children = children

    def route(self, values) -> int:
        v = values[self.attr]
        return 0 if math.isnan(v) else int(v)


class HoeffdingTree(Classifier):
    """Incremental decision tree with Hoeffding-bound split gating.

    Parameters
    ----------
    grace_period: instances between split attempts at a leaf.
    split_confidence: delta of the Hoeffding bound.
    tie_threshold: split regardless of the gap once the bound is below this.
    leaf_strategy: 'mc' (majority class), 'nb' (adaptive naive Bayes, the
        default), 'knn', or 'sgd'.
    leaf_filter: optional filter spec dict (see features.parse_filter_spec);
        each leaf gets its own frozen filter seeded from (seed, leaf id).
    """

    def __init__(self, schema: Schema, grace_period: int = 200,
                 split_confidence: float = 1e-7, tie_threshold: float = 0.05,
                 leaf_strategy: str = "nb", leaf_filter: dict | None = None,
                 leaf_knn_k: int = 10, leaf_knn_window: int = 5000,
                 leaf_sgd_eta: float = 0.01, seed: int = 1):
        super().__init__(schema)
        if leaf_strategy not in LEAF_STRATEGIES:
            raise ValueError(f"unknown leaf strategy {leaf_strategy!r}")
        if not 0.0 < split_confidence < 1.0:
            raise ValueError("split_confidence must be in (0,1)")
        self.grace_period = grace_period
        self.split_confidence = split_confidence
        self.tie_threshold = tie_threshold
        self.leaf_strategy = leaf_strategy
        self.leaf_filter = leaf_filter
        self.leaf_knn_k = leaf_knn_k
        self.leaf_knn_window = leaf_knn_window
        self.leaf_sgd_eta = leaf_sgd_eta
        self.seed = seed
        self._needs_encoding = leaf_strategy in ("knn", "sgd")
        self.reset()

    def reset(self) -> None:
        self._next_leaf_id = 0
        self.n_splits = 0
        self.split_log: list[tuple[float, float, float, float, float]] = []
        self.root = self._new_leaf()

    # -- leaf construction -------------------------------------------------

    def _new_leaf(self, initial_counts=None) -> _Leaf:
        leaf_id = self._next_leaf_id
        self._next_leaf_id += 1
        stats = SufficientStats(self.schema, initial_counts)
        learner = self._new_leaf_learner(leaf_id)
        return _Leaf(stats, learner, leaf_id, weight_seen=stats.total_weight)

    def _new_leaf_learner(self, leaf_id):
        kind = self.leaf_strategy
        if kind == "mc":
            return None
        if kind == "nb":
            return _LeafLearner("nb")
        filt = None
        width = self.schema.encoded_width
        if self.leaf_filter is not None:
            d = width
            spec = self.leaf_filter
            h = spec["h"] if spec.get("h") else max(1, int(round(spec["ratio"] * d)))
            leaf_seed = int(np.random.SeedSequence([self.seed, leaf_id]).generate_state(1)[0])
            filt = RandomFeatureFilter(leaf_seed, d, h, spec["activation"], spec.get("gamma", 1.0))
            width = h
        sub_schema = make_schema([numeric(f"u{j}") for j in range(width)], self.schema.class_values)
        if kind == "knn":
            model = KnnClassifier(sub_schema, k=self.leaf_knn_k, window=self.leaf_knn_window)
        else:
            model = SgdLinear(sub_schema, learning_rate=self.leaf_sgd_eta)
        learner = _LeafLearner(kind, model, filt)
        learner.schema = sub_schema
        return learner

    # -- routing -----------------------------------------------------------

    def _sort_to_leaf(self, values):
        node = self.root
        parent, branch = None, -1
        while not isinstance(node, _Leaf):
            parent, branch = node, node.route(values)
            node = node.children[branch]
        return node, parent, branch

    def _leaf_input(self, leaf: _Leaf, instance: Instance, encoded) -> Instance:
        learner = leaf.learner
        if learner.filter is not None:
            return Instance(learner.filter.project(encoded), instance.label, instance.weight)
        return Instance(encoded, instance.label, instance.weight)

    def _learner_votes(self, leaf: _Leaf, instance: Instance, encoded, leaf_input=None) -> np.ndarray:
        learner = leaf.learner
        if learner.kind == "nb":
            return leaf.stats.nb_votes(instance.values)
        if leaf_input is None:
            leaf_input = self._leaf_input(leaf, instance, encoded)
        return learner.model.predict(leaf_input)

    # -- prediction --------------------------------------------------------

    def predict(self, instance: Instance) -> np.ndarray:
        leaf, _, _ = self._sort_to_leaf(instance.values)
        if leaf.learner is not None and leaf.learner.correct > leaf.mc_correct:
            encoded = (
                encode_dense(self.schema, instance.values) if self._needs_encoding else None
            )
            return self._learner_votes(leaf, instance, encoded)
        return leaf.stats.counts.copy()

    # -- training ----------------------------------------------------------

    def train(self, instance: Instance, weight: float = 1.0) -> None:
        w = weight * instance.weight
        values = instance.values
        leaf, parent, branch = self._sort_to_leaf(values)
        encoded = encode_dense(self.schema, values) if self._needs_encoding else None

        # leaf-local prequential accounting, recorded before any update
        if vote_argmax(leaf.stats.counts) == instance.label:
            leaf.mc_correct += w
        learner = leaf.learner
        # project through the leaf filter once per instance (reluinc filters
        # fold each projection into their running means)
        leaf_input = None
        if learner is not None and learner.model is not None:
            leaf_input = self._leaf_input(leaf, instance, encoded)
        if learner is not None:
            votes = self._learner_votes(leaf, instance, encoded, leaf_input)
            if vote_argmax(votes) == instance.label:
                learner.correct += w

        leaf.stats.update(values, instance.label, w)
        if learner is not None and learner.model is not None:
            learner.model.train(leaf_input, weight=w)

        seen = leaf.stats.total_weight
        if seen - leaf.weight_at_last_attempt >= self.grace_period:
            leaf.weight_at_last_attempt = seen
            self._attempt_split(leaf, parent, branch)

    # -- splitting ---------------------------------------------------------

    def _attempt_split(self, leaf: _Leaf, parent, branch) -> None:
        stats = leaf.stats
        if np.count_nonzero(stats.counts) < 2:
            return
        candidates = []  # (gain, attr index, payload)
        if len(stats.numeric_idx):
            variances = stats.variances()
            for pos, attr in enumerate(stats.numeric_idx):
                best = _best_numeric_split(stats, pos, variances)
                if best is not None:
                    gain, t, lhs, rhs = best
                    candidates.append((gain, int(attr), ("numeric", t, lhs, rhs)))
        for pos, j in enumerate(stats.nominal_idx):
            table = stats.nominal_table(pos)
            if table.sum() <= 0:
                continue
            candidates.append((info_gain_nominal(table), int(j), ("nominal", table)))
        if not candidates:
            return
        # equal gains break to the lower attribute index
        candidates.sort(key=lambda c: (-c[0], c[1]))
        g1 = candidates[0][0]
        g2 = candidates[1][0] if len(candidates) > 1 else 0.0
        n = stats.total_weight
        eps = hoeffding_bound(math.log2(self.schema.n_classes), self.split_confidence, n)
        if g1 > 0 and (g1 - g2 > eps or eps < self.tie_threshold):
            self.split_log.append((g1, g2, eps, self.tie_threshold, n))
            self._execute_split(leaf, parent, branch, candidates[0])

    def _execute_split(self, leaf: _Leaf, parent, branch, winner) -> None:
        _, attr, payload = winner
        if payload[0] == "numeric":
            _, threshold, lhs, rhs = payload
            children = [self._new_leaf(lhs), self._new_leaf(rhs)]
            split = _NumericSplit(attr, threshold, children)
        else:
            table = payload[1]
            children = [self._new_leaf(table[:, v].copy()) for v in range(table.shape[1])]
            split = _NominalSplit(attr, children)
        if parent is None:
            self.root = split
        else:
            parent.children[branch] = split
        self.n_splits += 1

    # -- introspection -----------------------------------------------------

    def depth(self) -> int:
        best = 0
        stack = [(self.root, 0)]
        while stack:
            node, d = stack.pop()
            if isinstance(node, _Leaf):
                best = max(best, d)
            else:
                stack.extend((c, d + 1) for c in node.children)
        return best
