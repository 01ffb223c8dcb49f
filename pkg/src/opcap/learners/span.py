"""Row-reduction learners for families that are linear in a feature map.

Two budgets are available:

* uncapped: keep every mistake row, re-solve the system after a mistake and
  answer with the particular solution (cheap guesses, expensive updates);
* capped: keep a linearly independent subset and test each input for span
  membership (every round costs O(dim^3), updates are free).
"""
from __future__ import annotations

from fractions import Fraction

from ..errors import ExhaustedFamily
from ..numerics import FREE, dot, drain, rref_op_bound, solve_steps, span_coeffs_steps, span_op_bound
from .base import Learner

# pinned constant of the capped learners: ops per round <= CAP_CONSTANT * n^3
CAP_CONSTANT = 12


class SpanLearner(Learner):
    def __init__(self, family, capped: bool = False):
        super().__init__(family)
        self.capped = capped
        self.field = family.field
        self.dim, self.q = family.dim, family.q
        self.rows = []     # feature vectors of learned examples
        self.values = []   # their target tuples
        self.theta = None  # uncapped hypothesis (dim x q)
        self.pending = False
        self._last = None

    # -- certificates ------------------------------------------------------
    @property
    def mistake_bound(self):
        return self.dim

    def guess_cost(self) -> int:
        """Binary ops of one hypothesis evaluation (uncapped mode, linear features)."""
        return self.q * (2 * self.dim - 1)

    def update_bound(self) -> int:
        """Worst-case ops of one post-mistake re-solve."""
        return rref_op_bound(self.dim, self.dim + self.q, self.dim)

    def round_bound(self) -> int:
        """Worst-case ops of one capped round (span test plus recombination)."""
        return span_op_bound(self.dim, self.dim) + self.q * (2 * self.dim - 1)

    # -- pieces used by the phase wrapper -------------------------------------
    def _features(self, x, meter):
        if self._last is not None and self._last[0] == x:
            return self._last[1]
        feats = self.family.features(x, meter)
        self._last = (x, feats)
        return feats

    def guess(self, x, meter):
        feats = self._features(x, meter)
        if self.theta is None:
            return self.family.default
        vals = tuple(dot(feats, [row[c] for row in self.theta], self.field, meter) for c in range(self.q))
        return self.family.from_targets(vals)

    def learn(self, x, y):
        t = self.family.targets(y)
        if t is None:
            raise ExhaustedFamily(f"output {y!r} cannot be produced by the family")
        self.rows.append(list(self._features(x, FREE)))
        self.values.append(list(t))
        if len(self.rows) > self.dim:
            raise ExhaustedFamily("more independent mistakes than the dimension allows")

    def update_steps(self, meter):
        sol = yield from solve_steps([list(r) for r in self.rows], [list(v) for v in self.values],
                                     self.field, meter, n=self.dim)
        return sol

    def finish(self, sol):
        if sol is None:
            raise ExhaustedFamily("the learned examples are inconsistent")
        self.theta = sol.particular
        self.pending = False

    # -- round contract ---------------------------------------------------------
    def answer(self, x, meter):
        if self.capped:
            return self._capped_answer(x, meter)
        if self.pending:
            self.finish(drain(self.update_steps(meter)))
        return self.guess(x, meter)

    def _span_value(self, feats, meter):
        if not self.rows:
            return None
        coeffs = drain(span_coeffs_steps(self.rows, feats, self.field, meter))
        if coeffs is None:
            return None
        return tuple(dot(coeffs, [v[c] for v in self.values], self.field, meter) for c in range(self.q))

    def _capped_answer(self, x, meter):
        vals = self._span_value(self._features(x, meter), meter)
        return self.family.default if vals is None else self.family.from_targets(vals)

    def observe(self, x, guess, feedback):
        y = self.revealed(feedback)
        if y == guess:
            return
        self.learn(x, y)
        if not self.capped:
            self.pending = True


class ReluLearner(SpanLearner):
    """One-layer relu networks: answer relu(sum c_j z_j) when the extended input is
    in the span of extended inputs with positive outputs, else 0.

    Uncapped keeps every positive example (cost grows with the history);
    capped keeps only the independent ones gathered at mistakes.
    """

    def __init__(self, family, capped: bool = False):
        super().__init__(family, capped)

    def answer(self, x, meter):
        return self._capped_answer(x, meter)

    def _capped_answer(self, x, meter):
        vals = self._span_value(self._features(x, meter), meter)
        return Fraction(0) if vals is None else max(vals[0], Fraction(0))

    def observe(self, x, guess, feedback):
        y = self.revealed(feedback)
        if not isinstance(y, (int, Fraction)) or y < 0:
            raise ExhaustedFamily(f"relu output {y!r} is impossible")
        if y == 0 or (self.capped and y == guess):
            return
        self.rows.append(list(self._features(x, FREE)))
        self.values.append([Fraction(y)])
        if self.capped and len(self.rows) > self.dim:
            raise ExhaustedFamily("more independent mistakes than the dimension allows")


def span_learner(family, capped: bool = False) -> SpanLearner:
    return SpanLearner(family, capped)


def affine_activation_learner(family) -> SpanLearner:
    if not getattr(family, "invertible", False):
        raise ValueError("affine activation learner needs an invertible activation")
    return SpanLearner(family)


def relu_learner(family, capped: bool = False) -> ReluLearner:
    return ReluLearner(family, capped)


def softmax_learner(family) -> SpanLearner:
    return SpanLearner(family)


def poly_learner(family) -> SpanLearner:
    return SpanLearner(family)

