"""Reductions along an order map between families, and the learner for the combined star family."""
from __future__ import annotations

from typing import Callable

from ..learners.base import Learner
from ..learners.basic import ZeroDefaultMemorizer
from ..learners.span import SpanLearner
from ..values import Left, Reveal, Right


class OrderReduction(Learner):
    """Learns family F through a learner for G, given an input map ``to_g`` and
    output translations ``out_from_g`` (G answer to F answer) and
    ``out_to_g`` (revealed F output to G output).

    All three maps receive the round meter as last argument. The feedback
    translation is deferred to the start of the next answer, so a round costs
    the G learner's ops plus ``a_m`` plus the translations.
    """

    def __init__(self, family, inner: Learner, to_g: Callable = None,
                 out_from_g: Callable = None, out_to_g: Callable = None,
                 a_m: int = 0, a_s: int = 0):
        super().__init__(family)
        self.inner = inner
        self.to_g = to_g or (lambda x, meter: x)
        self.out_from_g = out_from_g or (lambda x, y, meter: y)
        self.out_to_g = out_to_g or (lambda x, y, meter: y)
        self.a_m, self.a_s = a_m, a_s
        self._pending = None
        self._last = None

    def op_bound(self, a: int) -> int:
        return a + self.a_m + self.a_s

    def answer(self, x, meter):
        if self._pending is not None:
            gx, gguess, x_prev, y = self._pending
            self._pending = None
            self.inner.observe(gx, gguess, Reveal(self.out_to_g(x_prev, y, meter)))
        gx = self.to_g(x, meter)
        gguess = self.inner.answer(gx, meter)
        self._last = (gx, gguess)
        return self.out_from_g(x, gguess, meter)

    def observe(self, x, guess, feedback):
        y = self.revealed(feedback)
        gx, gguess = self._last
        self._pending = (gx, gguess, x, y)


def order_reduction(family, inner, to_g=None, out_from_g=None, out_to_g=None, a_m=0, a_s=0):
    return OrderReduction(family, inner, to_g, out_from_g, out_to_g, a_m, a_s)


class CombinedStarLearner(Learner):
    """Row reduction on the linear half, memorisation on the sparse half.

    Mistakes <= 2n: at most n on each half.
    """

    def __init__(self, family):
        super().__init__(family)
        self.left = SpanLearner(family.left)
        self.right = ZeroDefaultMemorizer(family.right)

    @property
    def mistake_bound(self):
        return 2 * self.family.n

    def _route(self, x):
        if isinstance(x, Left):
            return self.left, x.vec
        if isinstance(x, Right):
            return self.right, x.n
        raise TypeError(f"expected Left or Right input, got {x!r}")

    def answer(self, x, meter):
        learner, inner_x = self._route(x)
        return learner.answer(inner_x, meter)

    def observe(self, x, guess, feedback):
        learner, inner_x = self._route(x)
        learner.observe(inner_x, guess, feedback)


def combined_star_learner(family) -> CombinedStarLearner:
    return CombinedStarLearner(family)
