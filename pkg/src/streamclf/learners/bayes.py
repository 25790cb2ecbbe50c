"""Class-conditional sufficient statistics and Gaussian/nominal naive Bayes.

The same statistics back three things: naive Bayes prediction, Hoeffding
tree leaf distributions, and the tree's split-candidate evaluation, so
one update pays for all of them.
"""

from __future__ import annotations

import math

import numpy as np

from .. import backend
from ..core import Classifier, Instance, Schema

__all__ = ["SufficientStats", "NaiveBayes", "VAR_FLOOR"]

VAR_FLOOR = 1e-12
_NEG_INF = -np.inf
_LOG_2PI = float(np.log(2.0 * np.pi))


class SufficientStats:
    """Per-class weighted counts, Gaussian moments for numeric attributes,
    and value counts for nominal attributes.

    Numeric moments use weighted Welford updates; per-attribute observed
    min/max feed the tree's split thresholds. Nominal counts live in one
    (attr, class, value) block, padded to the largest domain, so updates
    and likelihoods are single fancy-indexing operations.
    """

    def __init__(self, schema: Schema, initial_counts=None):
        self.schema = schema
        C = schema.n_classes
        self.counts = np.zeros(C) if initial_counts is None else np.asarray(initial_counts, float).copy()
        self.numeric_idx = np.array(
            [i for i, a in enumerate(schema.attributes) if not a.is_nominal], dtype=np.intp
        )
        dn = len(self.numeric_idx)
        self.w_sum = np.zeros((C, dn))
        self.mean = np.zeros((C, dn))
        self.m2 = np.zeros((C, dn))
        self.amin = np.full(dn, np.inf)
        self.amax = np.full(dn, -np.inf)
        self.nominal_idx = np.array(
            [i for i, a in enumerate(schema.attributes) if a.is_nominal], dtype=np.intp
        )
        self.nominal_sizes = [len(schema.attributes[i].values) for i in self.nominal_idx]
        if len(self.nominal_idx):
            self.nom_tables = np.zeros((len(self.nominal_idx), C, max(self.nominal_sizes)))
            self._nom_pos = np.arange(len(self.nominal_idx))
        else:
            self.nom_tables = None

    @property
    def total_weight(self) -> float:
        return float(self.counts.sum())

    def nominal_table(self, pos: int) -> np.ndarray:
        """(class x value) counts of the pos-th nominal attribute."""
        return self.nom_tables[pos, :, : self.nominal_sizes[pos]]

    def update(self, values: np.ndarray, label: int, weight: float = 1.0) -> None:
        self.counts[label] += weight
        if len(self.numeric_idx):
            v = values[self.numeric_idx]
            ok = ~np.isnan(v)
            if ok.all():
                ws = self.w_sum[label]
                ws += weight
                delta = v - self.mean[label]
                self.mean[label] += delta * (weight / ws)
                self.m2[label] += weight * delta * (v - self.mean[label])
                np.minimum(self.amin, v, out=self.amin)
                np.maximum(self.amax, v, out=self.amax)
            elif ok.any():
                vv = v[ok]
                ws = self.w_sum[label, ok] + weight
                self.w_sum[label, ok] = ws
                delta = vv - self.mean[label, ok]
                self.mean[label, ok] += delta * (weight / ws)
                self.m2[label, ok] += weight * delta * (vv - self.mean[label, ok])
                self.amin[ok] = np.minimum(self.amin[ok], vv)
                self.amax[ok] = np.maximum(self.amax[ok], vv)
        if self.nom_tables is not None:
            v = values[self.nominal_idx]
            ok = ~np.isnan(v)
            if ok.all():
                self.nom_tables[self._nom_pos, label, v.astype(np.intp)] += weight
            elif ok.any():
                self.nom_tables[self._nom_pos[ok], label, v[ok].astype(np.intp)] += weight

    def variances(self) -> np.ndarray:
        """Per (class, numeric attr) sample variance, 0 where undefined."""
        denom = self.w_sum - 1.0
        with np.errstate(invalid="ignore", divide="ignore"):
            var = self.m2 / denom
        return np.where(denom > 0, var, 0.0)

    def nb_votes(self, values: np.ndarray) -> np.ndarray:
        """Posterior-proportional votes for one instance's raw values.

        Laplace-smoothed priors and nominal likelihoods; Gaussian numeric
        likelihoods with a variance floor. Classes never observed get zero
        votes once anything has been seen. Cold start is uniform.
        """
        C = self.schema.n_classes
        total = self.total_weight
        if total <= 0:
            return np.full(C, 1.0 / C)
        if self.nom_tables is None and len(self.numeric_idx):
            v = values[self.numeric_idx]
            if not np.isnan(v).any():
                return backend.nb_votes_numeric(
                    self.counts, self.w_sum, self.mean, self.m2, v, VAR_FLOOR
                )
        log_votes = np.log(self.counts + 1.0) - math.log(total + C)
        if len(self.numeric_idx):
            v = values[self.numeric_idx]
            ok = ~np.isnan(v)
            if ok.any():
                x = v[ok]
                w_ok = self.w_sum[:, ok]
                var = np.maximum(self.variances()[:, ok], VAR_FLOOR)
                if (w_ok > 0).all():
                    log_votes += backend.gauss_loglik(self.mean[:, ok], var, x)
                else:
                    # attributes a class has never seen carry no information
                    d = x - self.mean[:, ok]
                    terms = -0.5 * (d * d / var + np.log(var) + _LOG_2PI)
                    log_votes += np.where(w_ok > 0, terms, 0.0).sum(axis=1)
        if self.nom_tables is not None:
            v = values[self.nominal_idx]
            ok = ~np.isnan(v)
            if ok.any():
                pos = self._nom_pos[ok]
                cols = self.nom_tables[pos, :, v[ok].astype(np.intp)]  # (k, C)
                mass = self.nom_tables[pos].sum(axis=2)                # (k, C)
                sizes = np.asarray(self.nominal_sizes, dtype=np.float64)[ok]
                log_votes += (np.log(cols + 1.0) - np.log(mass + sizes[:, None])).sum(axis=0)
        log_votes[self.counts <= 0] = _NEG_INF
        log_votes -= log_votes.max()
        return np.exp(log_votes)


class NaiveBayes(Classifier):
    """Incremental naive Bayes: Gaussian numeric likelihoods with a variance
    floor, Laplace-smoothed nominal counts.
    """

    def __init__(self, schema: Schema):
        super().__init__(schema)
        self.stats = SufficientStats(schema)

    def predict(self, instance: Instance) -> np.ndarray:
        return self.stats.nb_votes(instance.values)

    def train(self, instance: Instance, weight: float = 1.0) -> None:
        self.stats.update(instance.values, instance.label, weight * instance.weight)

    def reset(self) -> None:
        self.stats = SufficientStats(self.schema)
