"""Weighted-majority meta-learners built from copies of a standard learner.

Every copy carries a weight and the list of outputs it was told. The meta
learner answers with the heaviest vote (ties go to the smallest output).
After a meta mistake some copies are replaced by clones, each told a different
output for the round's input; clones whose memory no member of the family
could produce are dropped (the consistency oracle is not charged).

Arithmetic per round: each copy's own answer, one addition per extra vote
in the tally, and the clone weights of the previous round's splits (one or two
operations per split parent, charged when the clones first vote).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..errors import ExhaustedFamily, NoActiveCopies, OpcapError
from ..learners.base import Learner
from ..numerics import FREE, OpMeter, binary_op
from ..values import Equals, Reveal, Verdict, sort_key

MAX_COPIES = 50_000


def bandit_alpha(k: int) -> Fraction:
    """1 / (k ln k) as an exact rational with a denominator below 2^64."""
    return Fraction(1 / (k * math.log(k))).limit_denominator(2 ** 64)


class _SplitWeights:
    """Weights of the clones of one split parent, each computed once.

    ``recipe`` maps a key to ``(base_key, op, constant)``; base_key None means
    the parent weight, so derived weights can share an earlier result.
    """

    def __init__(self, parent_weight: Fraction, recipe: dict):
        self.parent = parent_weight
        self.recipe = recipe
        self.cache = {}

    def resolve(self, key, meter: OpMeter) -> Fraction:
        if key not in self.cache:
            base_key, op, c = self.recipe[key]
            base = self.parent if base_key is None else self.resolve(base_key, meter)
            self.cache[key] = binary_op(op, base, c, meter)
        return self.cache[key]


@dataclass
class WeightedCopy:
    learner: Learner
    weight: Fraction | None
    memory: tuple = ()
    splits: int = 0
    pending: tuple | None = None  # (_SplitWeights, key)
    votes: list = field(default_factory=list)

    def settle(self, meter: OpMeter):
        if self.pending is not None:
            group, key = self.pending
            self.weight = group.resolve(key, meter)
            self.pending = None


class VotingLearner(Learner):
    """Shared machinery; subclasses decide who splits and with which weights."""

    feedback = "bandit"
    kind = "voting"

    def __init__(self, family, factory: Callable[[], Learner], M: int):
        super().__init__(family)
        if family.k is None:
            raise OpcapError("voting needs a finite codomain")
        self.k = family.k
        self.values = sorted(family.codomain(), key=sort_key)
        self.M = M
        self.copies = [WeightedCopy(factory(), Fraction(1))]
        self.mistakes = 0
        self.trace = []  # one entry per round: total weight before the round, copies, mistake flag
        self._consistency = {}

    # -- bookkeeping ----------------------------------------------------------
    def _settle_all(self, meter):
        for c in self.copies:
            c.settle(meter)

    def total_weight(self) -> Fraction:
        """Exact total weight of active copies (audit only, not charged)."""
        self._settle_all(FREE)
        return sum((c.weight for c in self.copies), Fraction(0))

    def _consistent(self, memory) -> bool:
        key = tuple(memory)
        if key not in self._consistency:
            self._consistency[key] = bool(self.family.consistent(list(memory)))
        return self._consistency[key]

    def _spawn(self, parent: WeightedCopy, x, guess, value, group, key):
        memory = parent.memory + (Equals(x, value),)
        if not self._consistent(memory):
            return None
        learner = parent.learner.clone()
        try:
            learner.observe(x, guess, Reveal(value))
        except ExhaustedFamily:
            return None
        return WeightedCopy(learner, None, memory, parent.splits + 1, (group, key))

    def _replace(self, new_copies):
        if not new_copies:
            raise NoActiveCopies("every copy was eliminated; the feedback is inconsistent with the family")
        if len(new_copies) > MAX_COPIES:
            raise OpcapError(f"more than {MAX_COPIES} active copies")
        self.copies = new_copies

    def _tally(self, voters, meter):
        buckets = {}
        for c, v in voters:
            if v in buckets:
                buckets[v] = binary_op("add", buckets[v], c.weight, meter)
            else:
                buckets[v] = c.weight
        best = max(buckets.values())
        return min((v for v, w in buckets.items() if w == best), key=sort_key)

    def _vote_round(self, x, meter, voters):
        out = []
        for c in voters:
            try:
                v = c.learner.answer(x, meter)
            except ExhaustedFamily:
                v = None
            out.append((c, v))
        live = [(c, v) for c, v in out if v is not None]
        if not live:
            raise NoActiveCopies("no copy could answer")
        if len(live) < len(out):
            dead = {id(c) for c, v in out if v is None}
            self.copies = [c for c in self.copies if id(c) not in dead]
        return live, self._tally(live, meter)

    def answer(self, x, meter):
        self._settle_all(meter)
        self.trace.append({"W": sum((c.weight for c in self.copies), Fraction(0)),
                           "Q": len(self.copies), "mistake": False})
        votes, winner = self._vote_round(x, meter, self.copies)
        for c, v in votes:
            c.votes = [v]
        return winner

    def _record_mistake(self):
        self.mistakes += 1
        self.trace[-1]["mistake"] = True

    # -- audits -------------------------------------------------------------
    def decay_ratios(self) -> list:
        """W_{t+1} / W_t for every meta-mistake round t (exact)."""
        ws = [e["W"] for e in self.trace] + [self.total_weight()]
        return [ws[i + 1] / ws[i] for i, e in enumerate(self.trace) if e["mistake"]]

    def max_copies(self) -> int:
        return max([e["Q"] for e in self.trace] + [len(self.copies)])


class BanditMajority(VotingLearner):
    """Yes/no feedback. On "wrong", copies that voted the winner are replaced by
    up to k-1 clones of weight alpha * w, one per other output."""

    kind = "bandit"

    def __init__(self, family, factory, M: int, alpha: Fraction | None = None):
        super().__init__(family, factory, M)
        self.alpha = bandit_alpha(self.k) if alpha is None else Fraction(alpha)
        if (self.k - 1) * self.alpha >= 1:
            raise OpcapError("need (k-1) alpha < 1")

    @property
    def decay_factor(self) -> Fraction:
        """(k-1)/k + alpha."""
        return Fraction(self.k - 1, self.k) + self.alpha

    @property
    def tight_decay_factor(self) -> Fraction:
        """1 - (1 - (k-1) alpha) / k, never larger than ``decay_factor``."""
        return 1 - (1 - (self.k - 1) * self.alpha) / self.k

    def op_bound(self, a: int) -> int:
        return (self.k - 1) ** self.M * (a + 2)

    def observe(self, x, guess, feedback):
        if not isinstance(feedback, Verdict):
            raise OpcapError("bandit voting needs yes/no feedback")
        if feedback.correct:
            return
        self._record_mistake()
        out = []
        for c in self.copies:
            if c.votes[0] != guess:
                out.append(c)
                continue
            group = _SplitWeights(c.weight, {"a": (None, "mul", self.alpha)})
            for v in self.values:
                if v != guess:
                    clone = self._spawn(c, x, c.votes[0], v, group, "a")
                    if clone is not None:
                        out.append(clone)
        self._replace(out)


class _AgnosticBase(VotingLearner):
    def _split(self, c, x, told_heavy):
        group = _SplitWeights(c.weight, {"third": (None, "div", Fraction(3)),
                                         "third_k": ("third", "div", Fraction(self.k))})
        kids = []
        for v in self.values:
            key = "third" if v == told_heavy else "third_k"
            clone = self._spawn(c, x, c.votes[0], v, group, key)
            if clone is not None:
                kids.append(clone)
        return kids


class AgnosticStrongMajority(_AgnosticBase):
    """Revealed, possibly false, outputs. On a mistake with revealed q, every copy
    that voted otherwise splits into a clone told q (weight w/3) and clones told
    each other output (weight w/(3k))."""

    kind = "agnostic_strong"
    feedback = "standard"
    decay_factor = Fraction(5, 6)

    def observe(self, x, guess, feedback):
        q = self.revealed(feedback)
        if q == guess:
            return
        self._record_mistake()
        out = []
        for c in self.copies:
            if c.votes[0] == q:
                out.append(c)
            else:
                out.extend(self._split(c, x, q))
        self._replace(out)


class AgnosticWeakMajority(_AgnosticBase):
    """Yes/no, possibly false, feedback. On "wrong" for meta guess q, every copy
    that voted q splits into a clone told q (the lie branch, weight w/3) and
    clones told each other output (weight w/(3k))."""

    kind = "agnostic_weak"

    @property
    def decay_factor(self) -> Fraction:
        return 1 - Fraction(1, 3 * self.k)

    def observe(self, x, guess, feedback):
        if not isinstance(feedback, Verdict):
            raise OpcapError("weak agnostic voting needs yes/no feedback")
        if feedback.correct:
            return
        self._record_mistake()
        out = []
        for c in self.copies:
            if c.votes[0] != guess:
                out.append(c)
            else:
                out.extend(self._split(c, x, guess))
        self._replace(out)


class AmbiguousMajority(VotingLearner):
    """r answers per round, then one yes/no bit for the whole batch.

    Coordinate i is decided by the copies whose votes agree with the meta
    answers on coordinates before i. On "no", the copies that agreed on the
    whole batch are replaced by one clone per (coordinate, other output), told
    that single corrected output, at weight alpha * w with alpha = 1/(K ln K),
    K = k^r.
    """

    kind = "ambiguous"

    def __init__(self, family, factory, M: int, r: int, alpha: Fraction | None = None):
        super().__init__(family, factory, M)
        if r < 1:
            raise OpcapError("r must be positive")
        self.r = r
        self.alpha = bandit_alpha(self.k ** r) if alpha is None else Fraction(alpha)
        if r * (self.k - 1) * self.alpha >= 1:
            raise OpcapError("need r (k-1) alpha < 1")
        self._pos = 0
        self._meta = []

    @property
    def decay_factor(self) -> Fraction:
        kk = self.k ** self.r
        return 1 - (1 - self.r * (self.k - 1) * self.alpha) / kk

    def op_bound(self, a: int) -> int:
        return (self.r * (self.k - 1)) ** self.M * (self.r * a + self.r + 1)

    def answer(self, x, meter):
        if self._pos == 0:
            self._settle_all(meter)
            self.trace.append({"W": sum((c.weight for c in self.copies), Fraction(0)),
                               "Q": len(self.copies), "mistake": False})
            for c in self.copies:
                c.votes = []
            self._meta = []
        voters = [c for c in self.copies if c.votes == self._meta]
        votes, winner = self._vote_round(x, meter, voters)
        for c, v in votes:
            c.votes.append(v)
        self._meta.append(winner)
        self._pos = (self._pos + 1) % self.r
        return winner

    def observe(self, x, guess, feedback):
        self.observe_batch((x,), (guess,), feedback)

    def observe_batch(self, xs, guesses, feedback):
        if not isinstance(feedback, Verdict):
            raise OpcapError("ambiguous voting needs yes/no feedback")
        if len(xs) != self.r:
            raise OpcapError(f"expected a batch of {self.r}")
        self._pos = 0
        if feedback.correct:
            return
        self._record_mistake()
        guesses = list(guesses)
        out = []
        for c in self.copies:
            if c.votes != guesses:
                out.append(c)
                continue
            group = _SplitWeights(c.weight, {"a": (None, "mul", self.alpha)})
            for i, (xi, gi) in enumerate(zip(xs, guesses)):
                for v in self.values:
                    if v != gi:
                        clone = self._spawn(c, xi, gi, v, group, "a")
                        if clone is not None:
                            out.append(clone)
        self._replace(out)


def bandit_majority(family, factory, M, alpha=None):
    return BanditMajority(family, factory, M, alpha)


def agnostic_strong_majority(family, factory, M):
    return AgnosticStrongMajority(family, factory, M)


def agnostic_weak_majority(family, factory, M):
    return AgnosticWeakMajority(family, factory, M)


def ambiguous_majority(family, factory, M, r, alpha=None):
    return AmbiguousMajority(family, factory, M, r, alpha)


# ------------------------------------------------------------ closed forms


def strong_bound_holds(m: int, M: int, eta: int, k: int) -> bool:
    """(5/6)^m >= (1/3)^M (1/(3k))^eta, i.e. m within the agnostic-strong bound."""
    return Fraction(5, 6) ** m >= Fraction(1, 3) ** M * Fraction(1, 3 * k) ** eta


def strong_bound(M: int, eta: int, k: int) -> float:
    return (M * math.log(3) + eta * math.log(3 * k)) / math.log(6 / 5)


def weak_bound_holds(m: int, M: int, eta: int, k: int) -> bool:
    return (1 - Fraction(1, 3 * k)) ** m >= Fraction(1, 3 * k) ** M * Fraction(1, 3) ** eta


def weak_bound(M: int, eta: int, k: int) -> float:
    return (M * math.log(3 * k) + eta * math.log(3)) / -math.log(1 - 1 / (3 * k))


def bandit_bound_holds(m: int, M: int, alpha: Fraction, factor: Fraction) -> bool:
    return factor ** m >= alpha ** M


def bandit_bound(M: int, alpha: Fraction, factor: Fraction) -> float:
    return M * math.log(1 / float(alpha)) / -math.log(float(factor))


def largest_within(holds: Callable[[int], bool], limit: int = 100_000) -> int:
    """Largest m with holds(m) (holds is monotone decreasing in m)."""
    m = 0
    while m < limit and holds(m + 1):
        m += 1
    return m
