"""Adversaries: deterministic procedures that pick inputs and claim outputs.

An adversary hands out inputs with ``next_input()`` (None ends the game) and
answers ``respond(x, guess)`` with the output it claims the hidden function
has. The engine turns the claim into protocol feedback. Every adversary keeps
its claims so a finished game can be certified against the family.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable, Iterable

from .errors import BudgetExceeded, OpcapError, ValidationError
from .families import (
    BoundedDegreePoly, CombinedStar, Consistency, FloorParity, LinearField, LinearReal, OneLayer,
    SoftmaxLayer, SparseSupport, TwoLayerReluIndicator, digit_interval, satisfies,
)
from .values import Equals, Left, Right, sort_key, values_equal

HALF = Fraction(1, 2)


class Adversary:
    name = "adversary"

    def __init__(self, family):
        self.family = family
        self.claims = []  # Equals(x, claimed output), in order

    def next_input(self):
        raise NotImplementedError

    def _claim(self, x, guess):
        raise NotImplementedError

    def respond(self, x, guess):
        y = self._claim(x, guess)
        self.claims.append(Equals(x, y))
        return y

    def respond_batch(self, xs, guesses):
        return tuple(self.respond(x, g) for x, g in zip(xs, guesses))

    def next_batch(self, r: int):
        xs = []
        for _ in range(r):
            x = self.next_input()
            if x is None:
                return None
            xs.append(x)
        return tuple(xs)

    def witness(self) -> Consistency:
        return self.family.consistent(list(self.claims))


class HiddenFunctionAdversary(Adversary):
    """Fixed member; inputs from a list or drawn by the family's sampler."""

    name = "hidden"

    def __init__(self, family, member, inputs: Iterable | None = None, rounds: int | None = None,
                 seed: int = 0, sampler: Callable | None = None):
        super().__init__(family)
        self.member = member
        self.rng = random.Random(seed)
        self._inputs = iter(inputs) if inputs is not None else None
        self.sampler = sampler or family.random_input
        self.rounds = rounds
        self._served = 0

    def next_input(self):
        if self.rounds is not None and self._served >= self.rounds:
            return None
        self._served += 1
        if self._inputs is not None:
            return next(self._inputs, None)
        return self.sampler(self.rng)

    def _claim(self, x, guess):
        return self.family.evaluate(self.member, x)

    def witness(self) -> Consistency:
        ok = satisfies(self.family, self.member, self.claims)
        return Consistency(ok, self.member if ok else None)


class ForcingAdversary(Adversary):
    """Scripted forcing phase, then optional tail rounds answered by a witness.

    In the forcing phase every claim is the first candidate output that differs
    from the guess and keeps the claims consistent with the family.
    """

    name = "forcing"

    def __init__(self, family, inputs: Iterable, candidates: Callable, tail: int = 0, seed: int = 0):
        super().__init__(family)
        self._inputs = iter(inputs)
        self.candidates = candidates
        self.tail = tail
        self.rng = random.Random(seed)
        self.forcing = True
        self._member = None

    def next_input(self):
        if self.forcing:
            x = next(self._inputs, None)
            if x is not None:
                return x
            self.forcing = False
        if self.tail <= 0:
            return None
        self.tail -= 1
        if self._member is None:
            self._member = self.witness().witness
        return self.family.random_input(self.rng)

    def _claim(self, x, guess):
        if not self.forcing:
            return self.family.evaluate(self._member, x)
        options = list(self.candidates(x))
        for y in options:
            if not values_equal(y, guess) and self.family.consistent(self.claims + [Equals(x, y)]):
                return y
        for y in options:
            if self.family.consistent(self.claims + [Equals(x, y)]):
                return y
        raise OpcapError(f"no consistent claim available at {x!r}")


def basis_adversary(family, tail: int = 0, seed: int = 0) -> ForcingAdversary:
    """Zero vector then e_1..e_n (linear families skip the zero vector); every claim
    is one of two fixed outputs, whichever differs from the guess."""
    if isinstance(family, (LinearReal, LinearField)):
        inputs = [family.unit(i) for i in range(family.n)]
        claims = [family.from_targets((family.field.zero,)), family.from_targets((family.field.one,))]
    elif isinstance(family, (OneLayer, SoftmaxLayer)):
        zero = tuple(Fraction(0) for _ in range(family.n))
        units = [tuple(Fraction(int(i == j)) for j in range(family.n)) for i in range(family.n)]
        inputs = [zero] + units
        claims = family.basis_claims()
    else:
        raise ValidationError(f"basis adversary does not apply to {family.name}")
    adv = ForcingAdversary(family, inputs, lambda x: claims, tail, seed)
    adv.name = "basis"
    adv.forced = len(inputs)
    return adv


def poly_power_adversary(family: BoundedDegreePoly, tail: int = 0, seed: int = 0) -> ForcingAdversary:
    """Round t = 1..D serves the power-pattern point for t and claims 0 or 1 against the guess."""
    if not isinstance(family, BoundedDegreePoly):
        raise ValidationError("poly power adversary needs a bounded-degree polynomial family")
    inputs = [family.power_point(t) for t in range(1, family.dim + 1)]
    claims = [Fraction(0), Fraction(1)]
    adv = ForcingAdversary(family, inputs, lambda x: claims, tail, seed)
    adv.name = "poly_power"
    adv.forced = len(inputs)
    return adv


class FloorParityAdversary(ForcingAdversary):
    """Inputs 2, 4, 8, ...; every claimed bit is the opposite of the guess.

    The claims fix the binary digits of the hidden x one at a time, so the
    surviving interval is a dyadic digit interval; its midpoint is the witness.
    """

    name = "floor_parity"

    def __init__(self, family: FloorParity):
        if not isinstance(family, FloorParity):
            raise ValidationError("floor parity adversary needs the FloorParity family")
        super().__init__(family, (2 ** j for j in itertools.count(1)), lambda x: [0, 1])

    def bits(self):
        return [c.y for c in self.claims]

    def interval(self):
        return digit_interval(self.bits())


def floor_parity_adversary(family: FloorParity) -> FloorParityAdversary:
    return FloorParityAdversary(family)


class BisectionIndicatorAdversary(Adversary):
    """Keeps [lo, hi] with claimed f(lo) = 1 and f(hi) = 0, queries the midpoint and
    claims whichever of 0 and 1 is at least 1/2 away from the guess. A guess of
    exactly 1/2 gets alternating claims, starting with 1.
    """

    name = "bisection"

    def __init__(self, family: TwoLayerReluIndicator):
        if not isinstance(family, TwoLayerReluIndicator):
            raise ValidationError("bisection adversary needs the two-layer indicator family")
        super().__init__(family)
        self.lo, self.hi = Fraction(0), Fraction(1)
        self._next_tie = 1
        self.errors = []

    def next_input(self):
        return (self.lo + self.hi) / 2

    def _claim(self, x, guess):
        g = Fraction(guess) if not isinstance(guess, float) else Fraction(guess)
        if g == HALF:
            y, self._next_tie = self._next_tie, 1 - self._next_tie
        else:
            y = 0 if g > HALF else 1
        if y == 1:
            self.lo = x
        else:
            self.hi = x
        self.errors.append(abs(g - y))
        return Fraction(y)

    def witness(self) -> Consistency:
        return self.family.consistent(list(self.claims))


def bisection_indicator_adversary(family) -> BisectionIndicatorAdversary:
    return BisectionIndicatorAdversary(family)


class LyingWrapper(Adversary):
    """Replays a base adversary, lying on the scheduled rounds (1-based).

    ``strong`` lies replace the truth by another output (preferring one that also
    differs from the guess); ``weak`` lies flip the correct/incorrect verdict.
    """

    name = "lying"

    def __init__(self, base: Adversary, eta: int, schedule=(), mode: str = "strong"):
        super().__init__(base.family)
        if eta < 0:
            raise ValidationError("eta must be nonnegative")
        schedule = sorted(set(schedule))
        if len(schedule) > eta:
            raise BudgetExceeded(f"{len(schedule)} scheduled lies exceed the budget eta={eta}")
        if mode not in ("strong", "weak"):
            raise ValidationError("mode must be 'strong' or 'weak'")
        if self.family.k is None:
            raise ValidationError("lying needs a finite codomain")
        self.base, self.eta, self.schedule, self.mode = base, eta, set(schedule), mode
        self.values = sorted(self.family.codomain(), key=sort_key)
        self.round = 0
        self.lies = []

    def next_input(self):
        self.round += 1
        return self.base.next_input()

    def _claim(self, x, guess):
        truth = self.base.respond(x, guess)
        if self.round not in self.schedule:
            return truth
        if self.mode == "strong":
            others = [v for v in self.values if v != truth]
            y = next((v for v in others if v != guess), others[0])
        elif truth == guess:
            y = next(v for v in self.values if v != guess)
        else:
            y = guess
        self.lies.append(self.round)
        return y

    def respond_batch(self, xs, guesses):
        raise OpcapError("lying wrapper delivers one input per round")

    def truth(self):
        return list(self.base.claims)

    def witness(self) -> Consistency:
        return self.base.witness()


def lying_wrapper(base, eta, schedule=(), mode="strong") -> LyingWrapper:
    return LyingWrapper(base, eta, schedule, mode)


class VersionSpaceAdversary(Adversary):
    """Finite families: serves the input that splits the surviving members most
    evenly and claims the largest class of outputs that differ from the guess."""

    name = "version_space"

    def __init__(self, family, rounds: int):
        super().__init__(family)
        if family.members() is None:
            raise ValidationError("version space adversary needs a finite family")
        self.space = list(family.members())
        self.rounds = rounds

    def _classes(self, x):
        out = {}
        for m in self.space:
            out.setdefault(self.family.evaluate(m, x), []).append(m)
        return out

    def next_input(self):
        if len(self.claims) >= self.rounds:
            return None
        domain = self.family.domain
        return min(domain, key=lambda x: (max(len(v) for v in self._classes(x).values()), domain.index(x)))

    def _claim(self, x, guess):
        classes = self._classes(x)
        wrong = {y: ms for y, ms in classes.items() if y != guess}
        pool = wrong or classes
        y = min(pool, key=lambda v: (-len(pool[v]), sort_key(v)))
        self.space = pool[y]
        return y


def version_space_adversary(family, rounds: int) -> VersionSpaceAdversary:
    return VersionSpaceAdversary(family, rounds)


def hidden_function_adversary(family, member, inputs=None, rounds=None, seed=0, sampler=None):
    return HiddenFunctionAdversary(family, member, inputs, rounds, seed, sampler)


def sparse_support_adversary(family: SparseSupport, tail: int = 0, seed: int = 0) -> ForcingAdversary:
    """Inputs 1..n, each claimed nonzero and different from the guess."""
    if not isinstance(family, SparseSupport):
        raise ValidationError("sparse adversary needs the SparseSupport family")
    nonzero = list(range(1, family.k))
    adv = ForcingAdversary(family, range(1, family.n + 1), lambda x: nonzero, tail, seed)
    adv.name = "sparse"
    return adv


def combined_star_adversary(family: CombinedStar, tail: int = 0, seed: int = 0) -> ForcingAdversary:
    """Interleaves unit vectors on the linear half with fresh points on the sparse
    half, claiming an output that differs from the guess each time."""
    if not isinstance(family, CombinedStar):
        raise ValidationError("combined adversary needs the CombinedStar family")
    inputs = []
    for i in range(family.n):
        inputs.append(Left(family.left.unit(i)))
        inputs.append(Right(i + 1))
    values = family.codomain()
    nonzero = values[1:]

    def candidates(x):
        return values if isinstance(x, Left) else nonzero

    adv = ForcingAdversary(family, inputs, candidates, tail, seed)
    adv.name = "combined_star"
    return adv


def reciprocal_inputs(family, member, extra=()) -> list:
    """The two positive points of a reciprocal member (first a, then its reciprocal), then ``extra``."""
    a, b = member
    return [a, b] + list(extra)
