"""Restart strategy for revealed-but-possibly-false feedback.

Run a fresh base learner; once it has made M+1 claimed mistakes, or its
feedback is inconsistent with the family, throw it away and start over. Each
discarded epoch contains at least one lie, so with at most eta lies the total
number of claimed mistakes is at most (M+1)(eta+1) - 1, and the per-round
cost is the base learner's.
"""
from __future__ import annotations

from typing import Callable

from ..errors import ExhaustedFamily
from ..learners.base import Learner


class RestartLearner(Learner):
    def __init__(self, family, factory: Callable[[], Learner], M: int):
        super().__init__(family)
        self.factory, self.M = factory, M
        self.current = factory()
        self.epoch_mistakes = 0
        self.mistakes = 0
        self.restarts = 0

    def mistake_bound(self, eta: int) -> int:
        return (self.M + 1) * (eta + 1) - 1

    def _restart(self):
        self.current = self.factory()
        self.epoch_mistakes = 0
        self.restarts += 1

    def answer(self, x, meter):
        try:
            return self.current.answer(x, meter)
        except ExhaustedFamily:
            self._restart()
            return self.current.answer(x, meter)

    def observe(self, x, guess, feedback):
        y = self.revealed(feedback)
        if y != guess:
            self.mistakes += 1
            self.epoch_mistakes += 1
            if self.epoch_mistakes > self.M:
                self._restart()
                return
        try:
            self.current.observe(x, guess, feedback)
        except ExhaustedFamily:
            self._restart()


def agnostic_strong_restart(family, factory, M: int) -> RestartLearner:
    return RestartLearner(family, factory, M)
