"""Online bagging and leveraging bagging over any base learner.

Each training example reaches member m with weight K ~ Poisson(lambda),
drawn from that member's own seeded stream (so members can train in
parallel yet reproduce the sequential result). With change detection on,
every member's prequential 0/1 error feeds its own ADWIN detector; when
any detector fires, the member with the highest recent error is replaced
by a fresh one.
"""

from __future__ import annotations

import numpy as np

from .core import Classifier, Instance, Schema, vote_argmax
from .drift import Adwin

__all__ = ["OnlineBagging", "leveraging_bagging", "poisson_draw"]


def poisson_draw(rng: np.random.Generator, lam: float) -> int:
    """One Poisson(lam) repetition-weight draw."""
    if lam <= 0:
        raise ValueError("lambda must be > 0")
    return int(rng.poisson(lam))


class OnlineBagging(Classifier):
    """Poisson-weighted online bagging ensemble.

    With ``lam=1`` and detectors off this is Oza-Russell online bagging;
    ``leveraging_bagging`` configures lam=6 plus per-member ADWIN.

    ``member_factory(schema, seed) -> Classifier`` builds each base model.
    """

    def __init__(self, schema: Schema, member_factory, n_members: int = 10,
                 lam: float = 1.0, seed: int = 1, use_adwin: bool = False,
                 adwin_delta: float = 0.002):
        super().__init__(schema)
        if n_members < 1:
            raise ValueError("need at least one member")
        if lam <= 0:
            raise ValueError("lambda must be > 0")
        self.n_members = n_members
        self.lam = lam
        self.seed = seed
        self.use_adwin = use_adwin
        self.adwin_delta = adwin_delta
        self._member_factory = member_factory
        member_seeds = np.random.SeedSequence([seed, 7]).generate_state(n_members)
        self._member_seeds = [int(s) for s in member_seeds]
        self.members = [member_factory(schema, s) for s in self._member_seeds]
        self._init_rngs()
        self.detectors = [Adwin(adwin_delta) for _ in range(n_members)] if use_adwin else None
        self.n_resets = 0
        self._cache_key = None
        self._cache_votes = None

    def _init_rngs(self):
        ss = np.random.SeedSequence([self.seed, 11])
        self._rngs = [np.random.Generator(np.random.PCG64(c)) for c in ss.spawn(self.n_members)]

    def _member_votes(self, instance: Instance) -> list:
        # test-then-train calls predict and train on the same instance:
        # reuse the per-member votes computed before any member trained
        if instance is self._cache_key:
            return self._cache_votes
        votes = [member.predict(instance) for member in self.members]
        self._cache_key = instance
        self._cache_votes = votes
        return votes

    def train(self, instance: Instance, weight: float = 1.0) -> None:
        change = False
        member_votes = self._member_votes(instance) if self.detectors is not None else None
        for m, member in enumerate(self.members):
            if self.detectors is not None:
                err = 0.0 if vote_argmax(member_votes[m]) == instance.label else 1.0
                change |= self.detectors[m].update(err)
            k = poisson_draw(self._rngs[m], self.lam)
            if k > 0:
                member.train(instance, weight=k * weight)
        self._cache_key = None
        self._cache_votes = None
        if change:
            worst = max(
                range(self.n_members), key=lambda m: (self.detectors[m].mean, -m)
            )
            self.members[worst].reset()
            self.detectors[worst] = Adwin(self.adwin_delta)
            self.n_resets += 1

    def predict(self, instance: Instance) -> np.ndarray:
        votes = np.zeros(self.schema.n_classes)
        for v in self._member_votes(instance):
            s = v.sum()
            if s > 0:
                votes += v / s
        return votes

    def reset(self) -> None:
        self.members = [self._member_factory(self.schema, s) for s in self._member_seeds]
        self._init_rngs()
        if self.use_adwin:
            self.detectors = [Adwin(self.adwin_delta) for _ in range(self.n_members)]
        self.n_resets = 0


def leveraging_bagging(schema: Schema, member_factory, n_members: int = 10,
                       lam: float = 6.0, seed: int = 1,
                       adwin_delta: float = 0.002) -> OnlineBagging:
    """Leveraging bagging: higher-lambda resampling plus ADWIN member resets."""
    return OnlineBagging(
        schema,
        member_factory,
        n_members=n_members,
        lam=lam,
        seed=seed,
        use_adwin=True,
        adwin_delta=adwin_delta,
    )
