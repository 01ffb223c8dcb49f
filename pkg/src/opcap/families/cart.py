"""Coordinatewise lift of a family to r-tuples of inputs."""
from __future__ import annotations

import itertools

from ..errors import DomainMismatch, UnsupportedConstraintPattern, ValidationError
from ..numerics import FREE, OpMeter
from ..values import Equals, NotEquals
from .base import Consistency, Family, enumerate_consistent

MAX_BRANCHES = 4096


class CartFamily(Family):
    """Members f of the base act on (x_1..x_r) as (f(x_1), ..., f(x_r))."""

    name = "cart"

    def __init__(self, base: Family, r: int):
        if r < 1:
            raise ValidationError("r must be positive")
        self.base, self.r = base, r
        self.k = None if base.k is None else base.k ** r
        self.default = tuple(base.default for _ in range(r))
        self.opt_std = None
        self.eval_cost = None if base.eval_cost is None else r * base.eval_cost

    def params(self):
        return {"base": self.base.name, **self.base.params(), "r": self.r}

    def codomain(self):
        return list(itertools.product(self.base.codomain(), repeat=self.r))

    def check_input(self, x):
        if not isinstance(x, tuple) or len(x) != self.r:
            raise DomainMismatch(f"expected a batch of {self.r} inputs, got {x!r}")
        for xi in x:
            self.base.check_input(xi)

    def evaluate(self, member, x, meter: OpMeter = FREE):
        return tuple(self.base.evaluate(member, xi, meter) for xi in x)

    def members(self):
        return self.base.members()

    def consistent(self, constraints) -> Consistency:
        if self.base.members() is not None:
            return enumerate_consistent(self, constraints)
        fixed, options = [], []
        for c in constraints:
            self.check_input(c.x)
            if isinstance(c, Equals):
                fixed.extend(Equals(xi, yi) for xi, yi in zip(c.x, c.y))
            else:
                options.append([NotEquals(xi, yi) for xi, yi in zip(c.x, c.y)])
        branches = 1
        for o in options:
            branches *= len(o)
        if branches > MAX_BRANCHES:
            raise UnsupportedConstraintPattern("too many batch exclusions for an infinite base family")
        for choice in itertools.product(*options):
            res = self.base.consistent(fixed + list(choice))
            if res.ok:
                return res
        return Consistency(False)

    def random_member(self, rng):
        return self.base.random_member(rng)

    def random_input(self, rng):
        return tuple(self.base.random_input(rng) for _ in range(self.r))

    def parse_member(self, obj):
        return self.base.parse_member(obj)


def cart_lift(family: Family, r: int) -> Family:
    """CART_r of a family; r = 1 returns the family itself."""
    return family if r == 1 else CartFamily(family, r)
