"""Arithmetic-light learners: memorisation, the reciprocal check, sequential elimination,
and a few fixed strategies used to exercise adversaries."""
from __future__ import annotations

import random
from fractions import Fraction

from ..errors import ExhaustedFamily
from ..families import FiniteExplicit, ReciprocalTuple, satisfies
from ..values import Equals
from .base import Learner


class ZeroDefaultMemorizer(Learner):
    """Default output on unseen inputs, remembered output on repeats. Never computes."""

    def __init__(self, family, default=None):
        super().__init__(family)
        self.default = family.default if default is None else default
        self.memory = {}

    def answer(self, x, meter):
        return self.memory.get(x, self.default)

    def observe(self, x, guess, feedback):
        self.memory[x] = self.revealed(feedback)


class ReciprocalCheck(Learner):
    """After the first positive input z, answers 1 on q iff z_i q_i = 1 for every i.

    Spends exactly r multiplications on every check round.
    """

    def __init__(self, family: ReciprocalTuple):
        super().__init__(family)
        self.r = family.r
        self.anchor = None
        self.memory = {}

    def answer(self, x, meter):
        if x in self.memory:
            return self.memory[x]
        if self.anchor is None:
            return 0
        q = self.family._tuple(x)
        products = [meter.mul(zi, qi) for zi, qi in zip(self.anchor, q)]
        return int(all(p == 1 for p in products))

    def observe(self, x, guess, feedback):
        y = self.revealed(feedback)
        self.memory[x] = y
        if y == 1 and self.anchor is None:
            self.anchor = self.family._tuple(x)


class SequentialElimination(Learner):
    """Answers with the current member of a finite family; advances after each mistake.

    Table members are free to test, so the learner jumps to the next member
    consistent with everything seen. Program members cost arithmetic to
    evaluate, so it just moves to the next index.
    """

    def __init__(self, family: FiniteExplicit):
        super().__init__(family)
        self.index = 0
        self.seen = []

    @property
    def mistake_bound(self):
        return len(self.family.table) - 1

    def answer(self, x, meter):
        if self.index >= len(self.family.table):
            raise ExhaustedFamily("no member of the family is consistent with the feedback")
        return self.family.evaluate(self.index, x, meter)

    def observe(self, x, guess, feedback):
        y = self.revealed(feedback)
        self.seen.append(Equals(x, y))
        if y == guess:
            return
        self.index += 1
        if not self.family.uses_programs:
            while self.index < len(self.family.table) and not satisfies(self.family, self.index, self.seen):
                self.index += 1
        if self.index >= len(self.family.table):
            raise ExhaustedFamily("no member of the family is consistent with the feedback")


class ConstantLearner(Learner):
    """Always answers the same value; ignores feedback."""

    feedback = "bandit"

    def __init__(self, family, value):
        super().__init__(family)
        self.value = value

    def answer(self, x, meter):
        return self.value

    def observe(self, x, guess, feedback):
        pass


class FixedHypothesis(Learner):
    """Evaluates one fixed member of the family (charged) and never updates."""

    feedback = "bandit"

    def __init__(self, family, member):
        super().__init__(family)
        self.member = member

    def answer(self, x, meter):
        return self.family.evaluate(self.member, x, meter)

    def observe(self, x, guess, feedback):
        pass


class RandomGuess(Learner):
    """Seeded random guesses from a small candidate list; ignores feedback."""

    feedback = "bandit"

    def __init__(self, family, candidates, seed=0):
        super().__init__(family)
        self.candidates = list(candidates)
        self.rng = random.Random(seed)

    def answer(self, x, meter):
        return self.rng.choice(self.candidates)

    def observe(self, x, guess, feedback):
        pass


def default_candidates(family):
    """Small set of plausible outputs for random guessing."""
    if family.k is not None:
        return family.codomain()
    if hasattr(family, "basis_claims"):
        return family.basis_claims() + [family.default]
    return [Fraction(0), Fraction(1, 2), Fraction(1)]
