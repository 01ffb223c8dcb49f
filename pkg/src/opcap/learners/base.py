"""Learner contract.

``answer(x, meter)`` does all of a round's arithmetic and returns a guess.
``observe(x, guess, feedback)`` only records the feedback; any arithmetic it
implies runs at the start of the next ``answer`` and is charged there.
"""
from __future__ import annotations

import copy

from ..errors import OpcapError
from ..values import Reveal, Verdict


class Learner:
    feedback = "standard"  # "standard" learners need Reveal, "bandit" ones accept Verdict

    def __init__(self, family):
        self.family = family

    def answer(self, x, meter):
        raise NotImplementedError

    def observe(self, x, guess, feedback) -> None:
        raise NotImplementedError

    def answer_batch(self, xs, meter):
        return tuple(self.answer(x, meter) for x in xs)

    def observe_batch(self, xs, guesses, feedback) -> None:
        raise OpcapError(f"{type(self).__name__} does not accept batch feedback")

    def clone(self):
        """Deep copy sharing the (immutable) family object."""
        return copy.deepcopy(self, {id(self.family): self.family})

    @staticmethod
    def revealed(feedback):
        if not isinstance(feedback, Reveal):
            raise OpcapError("this learner needs standard feedback (the true output)")
        return feedback.value


class BinaryBanditAdapter(Learner):
    """Runs a standard learner under yes/no feedback when the codomain has two values:
    "wrong" then determines the true output."""

    feedback = "bandit"

    def __init__(self, inner: Learner):
        super().__init__(inner.family)
        values = inner.family.codomain()
        if len(values) != 2:
            raise OpcapError("the yes/no adapter needs a codomain of size 2")
        self.inner, self.values = inner, values

    def answer(self, x, meter):
        return self.inner.answer(x, meter)

    def observe(self, x, guess, feedback):
        if isinstance(feedback, Verdict):
            truth = guess if feedback.correct else next(v for v in self.values if v != guess)
            feedback = Reveal(truth)
        self.inner.observe(x, guess, feedback)
