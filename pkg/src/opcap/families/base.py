"""Common interface of function families and the shared consistency machinery."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Sequence

from ..errors import DomainMismatch, UnsupportedConstraintPattern
from ..numerics import FREE, OpMeter, nullspace, solve
from ..numerics.fields import QQ
from ..values import Equals, NotEquals


@dataclass
class Consistency:
    ok: bool
    witness: Any = None

    def __bool__(self):
        return self.ok


class Family:
    """A class of functions with counted evaluation and a consistency oracle.

    Subclasses set ``name``, ``k`` (codomain size or None when infinite),
    ``default`` (the distinguished output guessed by default learners) and
    ``opt_std`` (the declared standard mistake bound, None when unknown or
    infinite).
    """

    name = "family"
    k: int | None = None
    default: Any = None
    opt_std: int | None = None
    eval_cost: int | None = None

    def params(self) -> dict:
        return {}

    def facts(self) -> dict:
        """Declared theoretical quantities, for reports."""
        return {"opt_std": self.opt_std}

    def codomain(self) -> list:
        raise TypeError(f"{self.name} has an infinite codomain")

    def check_input(self, x) -> None:
        pass

    def evaluate(self, member, x, meter: OpMeter = FREE):
        raise NotImplementedError

    def consistent(self, constraints: Sequence) -> Consistency:
        raise NotImplementedError

    def random_member(self, rng: random.Random):
        raise NotImplementedError

    def random_input(self, rng: random.Random):
        raise NotImplementedError

    def members(self):
        """Finite enumeration of the family, or None."""
        return None

    def parse_member(self, obj):
        return obj

    def hidden(self, member) -> "HiddenFunction":
        return HiddenFunction(self, member)

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


@dataclass(frozen=True)
class HiddenFunction:
    family: Family
    member: Any

    def __call__(self, x, meter: OpMeter = FREE):
        return self.family.evaluate(self.member, x, meter)


def evaluate(family: Family, hidden, x, meter: OpMeter = FREE):
    """Evaluate a hidden member (or a HiddenFunction) of ``family`` at ``x``."""
    member = hidden.member if isinstance(hidden, HiddenFunction) else hidden
    family.check_input(x)
    return family.evaluate(member, x, meter)


def split(constraints):
    eq = [c for c in constraints if isinstance(c, Equals)]
    neq = [c for c in constraints if isinstance(c, NotEquals)]
    if len(eq) + len(neq) != len(constraints):
        raise DomainMismatch("constraints must be Equals or NotEquals")
    return eq, neq


def enumerate_consistent(family: Family, constraints) -> Consistency:
    """Brute force over a finite family."""
    for m in family.members():
        if satisfies(family, m, constraints):
            return Consistency(True, m)
    return Consistency(False)


def satisfies(family: Family, member, constraints) -> bool:
    for c in constraints:
        y = family.evaluate(member, c.x, FREE)
        if isinstance(c, Equals) and y != c.y:
            return False
        if isinstance(c, NotEquals) and y == c.y:
            return False
    return True


def disagreements(family: Family, member, constraints) -> int:
    return sum(not satisfies(family, member, [c]) for c in constraints)


def within_budget(family: Family, constraints, eta: int) -> tuple:
    """Find a member violating at most ``eta`` constraints.

    Returns ``(Consistency, dropped_indices)``. Finite families are scanned
    directly; otherwise subsets of up to ``eta`` constraints are dropped.
    """
    constraints = list(constraints)
    if family.members() is not None:
        best = None
        for m in family.members():
            d = disagreements(family, m, constraints)
            if d <= eta and (best is None or d < best[0]):
                best = (d, m)
                if d == 0:
                    break
        if best is None:
            return Consistency(False), None
        bad = [i for i, c in enumerate(constraints) if not satisfies(family, best[1], [c])]
        return Consistency(True, best[1]), bad
    for size in range(eta + 1):
        for drop in itertools.combinations(range(len(constraints)), size):
            kept = [c for i, c in enumerate(constraints) if i not in drop]
            res = family.consistent(kept)
            if res.ok:
                bad = [i for i, c in enumerate(constraints) if not satisfies(family, res.witness, [c])]
                return res, bad
    return Consistency(False), None


# ------------------------------------------------------ affine solvability


def _combine(field, particular, basis, params, dim, q):
    theta = [list(row) for row in particular]
    for j, vec in enumerate(basis):
        for col in range(q):
            t = params[j * q + col]
            if t == 0:
                continue
            for i in range(dim):
                if vec[i] != 0:
                    theta[i][col] = field.add(theta[i][col], field.mul(vec[i], t, FREE), FREE)
    return theta


def _apply(field, row, theta, q):
    out = []
    for col in range(q):
        acc = field.zero
        for a, th in zip(row, theta):
            if a != 0 and th[col] != 0:
                acc = field.add(acc, field.mul(a, th[col], FREE), FREE)
        out.append(acc)
    return tuple(out)


EXHAUSTIVE_LIMIT = 200_000


def solve_affine(field, eq_rows, eq_targets, neq_rows, neq_targets, dim: int, q: int):
    """Find theta (dim x q) with row . theta == target for every equality and
    row . theta != target (as a q-vector) for every exclusion. None if none exists.

    Exclusions are met by moving along the solution space on a moment curve;
    over a small finite field the search falls back to enumeration.
    """
    sol = solve([list(r) for r in eq_rows], [list(t) for t in eq_targets], field, FREE, n=dim)
    if sol is None:
        return None
    basis = nullspace(sol.reduced, sol.pivots, dim, field)
    nparams = len(basis) * q

    def ok(theta):
        return all(_apply(field, r, theta, q) != tuple(t) for r, t in zip(neq_rows, neq_targets))

    base = [list(row) for row in sol.particular]
    if ok(base):
        return base
    if nparams == 0:
        return None
    # an exclusion whose value is constant over the solution space is decisive
    for r, t in zip(neq_rows, neq_targets):
        if all(all(v == 0 for v in _apply(field, r, [[b] * q for b in vec], q)) for vec in basis):
            if _apply(field, r, base, q) == tuple(t):
                return None
    if field.size is None:
        bound = len(neq_rows) * nparams + 2
        for s in range(1, bound + 1):
            params = [field.coerce(s) ** (i + 1) for i in range(nparams)]
            theta = _combine(field, base, basis, params, dim, q)
            if ok(theta):
                return theta
        raise AssertionError("moment-curve search failed")  # impossible by degree count
    for s in range(field.size):
        params = [pow(s, i + 1, field.size) for i in range(nparams)]
        theta = _combine(field, base, basis, params, dim, q)
        if ok(theta):
            return theta
    if field.size ** nparams > EXHAUSTIVE_LIMIT:
        raise UnsupportedConstraintPattern("exclusion search space too large over a small field")
    for params in itertools.product(range(field.size), repeat=nparams):
        theta = _combine(field, base, basis, list(params), dim, q)
        if ok(theta):
            return theta
    return None


class AffineFamily(Family):
    """Families whose members are linear in a feature map of the input.

    Subclasses provide ``dim`` (feature length), ``q`` (targets per output),
    ``field``, ``features``, ``targets`` (output -> q-tuple or None when the
    output cannot be produced by any member), ``from_targets`` and
    ``member_from_theta`` / ``theta_of``.
    """

    field = QQ
    q = 1

    def features(self, x, meter: OpMeter = FREE) -> list:
        raise NotImplementedError

    def targets(self, y):
        raise NotImplementedError

    def from_targets(self, vals):
        raise NotImplementedError

    def member_from_theta(self, theta):
        raise NotImplementedError

    def basis_claims(self) -> list:
        """The two outputs a basis adversary alternates between."""
        zero = tuple(self.field.zero for _ in range(self.q))
        one = zero[:-1] + (self.field.one,)
        return [self.from_targets(zero), self.from_targets(one)]

    def consistent(self, constraints) -> Consistency:
        eq, neq = split(constraints)
        eq_rows, eq_t, neq_rows, neq_t = [], [], [], []
        for c in eq:
            self.check_input(c.x)
            t = self.targets(c.y)
            if t is None:
                return Consistency(False)
            eq_rows.append(self.features(c.x))
            eq_t.append(t)
        for c in neq:
            self.check_input(c.x)
            t = self.targets(c.y)
            if t is None:
                continue  # no member produces that value, so the exclusion is free
            neq_rows.append(self.features(c.x))
            neq_t.append(t)
        theta = solve_affine(self.field, eq_rows, eq_t, neq_rows, neq_t, self.dim, self.q)
        if theta is None:
            return Consistency(False)
        return Consistency(True, self.member_from_theta(theta))
