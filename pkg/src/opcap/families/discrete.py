"""Families with finite codomains: sparse supports, reciprocal pairs, explicit tables, digit parity."""
from __future__ import annotations

import random
from fractions import Fraction

from ..dag import DagProgram, affine_mod_dag, evaluate as eval_dag
from ..errors import DomainMismatch, ValidationError
from ..numerics import FREE, OpMeter
from ..values import Equals, Left, Right
from .base import Consistency, Family, enumerate_consistent, split
from .linear import LinearField


class SparseSupport(Family):
    """Functions Z -> {0..k-1} that are nonzero on at most n integers.

    A member is a sorted tuple of (input, nonzero value) pairs.
    """

    name = "sparse_support"
    default = 0

    def __init__(self, k: int, n: int):
        if k < 2 or n < 0:
            raise ValidationError("sparse support needs k >= 2 and n >= 0")
        self.k, self.n = k, n
        self.opt_std = n
        self.eval_cost = 0

    def params(self):
        return {"k": self.k, "n": self.n}

    def codomain(self):
        return list(range(self.k))

    def check_input(self, x):
        if not isinstance(x, int) or isinstance(x, bool):
            raise DomainMismatch(f"{self.name} expects an integer, got {x!r}")

    def evaluate(self, member, x, meter: OpMeter = FREE):
        return dict(member).get(x, 0)

    def consistent(self, constraints) -> Consistency:
        eq, neq = split(constraints)
        allowed = {}
        for c in eq + neq:
            self.check_input(c.x)
            cur = allowed.setdefault(c.x, set(range(self.k)))
            if isinstance(c, Equals):
                cur &= {c.y}
            else:
                cur.discard(c.y)
        support = []
        for x, vals in allowed.items():
            if not vals:
                return Consistency(False)
            if 0 not in vals:
                support.append((x, min(vals)))
        if len(support) > self.n:
            return Consistency(False)
        return Consistency(True, tuple(sorted(support)))

    def random_member(self, rng):
        xs = rng.sample(range(-10, 11), self.n)
        return tuple(sorted((x, rng.randrange(1, self.k)) for x in xs))

    def random_input(self, rng):
        return rng.randint(-10, 10)

    def parse_member(self, obj):
        return tuple(sorted((int(x), int(v)) for x, v in obj))


class CombinedStar(Family):
    """Disjoint union domain GF(p)^n + Z: a linear form on the left half and a
    sparse function (at most n nonzeros) on the right half."""

    name = "combined_star"
    default = 0

    def __init__(self, p: int, n: int):
        self.left = LinearField(p, n)
        self.right = SparseSupport(p, n)
        self.p, self.n, self.k = p, n, p
        self.opt_std = 2 * n

    def params(self):
        return {"p": self.p, "n": self.n}

    def codomain(self):
        return list(range(self.p))

    def check_input(self, x):
        if isinstance(x, Left):
            self.left.check_input(x.vec)
        elif isinstance(x, Right):
            self.right.check_input(x.n)
        else:
            raise DomainMismatch(f"{self.name} expects Left(vec) or Right(int), got {x!r}")

    def evaluate(self, member, x, meter: OpMeter = FREE):
        v, sparse = member
        if isinstance(x, Left):
            return self.left.evaluate(v, x.vec, meter)
        if isinstance(x, Right):
            return self.right.evaluate(sparse, x.n, meter)
        raise DomainMismatch(f"{x!r} is not in the domain")

    def consistent(self, constraints) -> Consistency:
        lefts, rights = [], []
        for c in constraints:
            self.check_input(c.x)
            if isinstance(c.x, Left):
                lefts.append(type(c)(c.x.vec, c.y))
            else:
                rights.append(type(c)(c.x.n, c.y))
        a = self.left.consistent(lefts)
        if not a:
            return Consistency(False)
        b = self.right.consistent(rights)
        if not b:
            return Consistency(False)
        return Consistency(True, (a.witness, b.witness))

    def random_member(self, rng):
        return self.left.random_member(rng), self.right.random_member(rng)

    def random_input(self, rng):
        if rng.random() < 0.5:
            return Left(self.left.random_input(rng))
        return Right(self.right.random_input(rng))

    def parse_member(self, obj):
        return self.left.parse_member(obj["v"]), self.right.parse_member(obj["support"])


class ReciprocalTuple(Family):
    """Indicator of a two-point set {a, b} of r-tuples with a_i * b_i = 1 and a != b.

    Zero binary operations evaluate a member (comparisons are free); the
    learner that generalises from one positive example needs r multiplications.
    """

    name = "reciprocal_tuple"
    default = 0
    k = 2
    opt_std = 1
    eval_cost = 0

    def __init__(self, r: int):
        if r < 1:
            raise ValidationError("r must be positive")
        self.r = r

    def params(self):
        return {"r": self.r}

    def facts(self):
        return {"opt_std": 1, "L_F": 0, "U_F": self.r,
                "opt_cap": {"a<r": 2, "a>=r": 1}}

    def codomain(self):
        return [0, 1]

    def _tuple(self, x):
        if not isinstance(x, tuple) or len(x) != self.r:
            raise DomainMismatch(f"{self.name} expects a tuple of length {self.r}, got {x!r}")
        return x

    def check_input(self, x):
        self._tuple(x)

    def evaluate(self, member, x, meter: OpMeter = FREE):
        a, b = member
        x = self._tuple(x)
        return int(x == a or x == b)

    @staticmethod
    def _reciprocal(z):
        return tuple(1 / Fraction(v) for v in z)

    def make_member(self, a):
        a = tuple(Fraction(v) for v in a)
        if any(v == 0 for v in a):
            raise ValidationError("entries must be nonzero")
        b = self._reciprocal(a)
        if a == b:
            raise ValidationError("the two points must be distinct")
        return a, b

    def consistent(self, constraints) -> Consistency:
        ones, zeros = set(), set()
        for c in constraints:
            x = self._tuple(c.x)
            if c.y not in (0, 1):
                if isinstance(c, Equals):
                    return Consistency(False)
                continue
            bit = c.y if isinstance(c, Equals) else 1 - c.y
            (ones if bit else zeros).add(x)
        if ones & zeros or len(ones) > 2:
            return Consistency(False)
        if ones:
            z = min(ones)
            if any(v == 0 for v in z):
                return Consistency(False)
            member = (z, self._reciprocal(z))
            if member[0] == member[1] or not ones <= set(member) or zeros & set(member):
                return Consistency(False)
            return Consistency(True, tuple(sorted(member)))
        t = 2
        while True:
            a = tuple(Fraction(t) for _ in range(self.r))
            b = self._reciprocal(a)
            if a not in zeros and b not in zeros:
                return Consistency(True, (b, a))
            t += 1

    def random_member(self, rng):
        while True:
            a = tuple(Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
                      for _ in range(self.r))
            if all(v != 0 for v in a) and a != self._reciprocal(a):
                return self.make_member(a)

    def random_input(self, rng):
        return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(self.r))

    def parse_member(self, obj):
        return self.make_member(obj if isinstance(obj, (list, tuple)) else [obj])


class ReciprocalPair(ReciprocalTuple):
    """The r = 1 case on plain rationals: f = 1 exactly on {x, 1/x}, x != +-1."""

    name = "reciprocal_pair"

    def __init__(self):
        super().__init__(1)

    def params(self):
        return {}

    def _tuple(self, x):
        if isinstance(x, tuple):
            return super()._tuple(x)
        if not isinstance(x, (int, Fraction)):
            raise DomainMismatch(f"{self.name} expects a rational, got {x!r}")
        return (Fraction(x),)

    def random_input(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def scalar_points(self, member):
        return member[0][0], member[1][0]


class FiniteExplicit(Family):
    """An explicit finite list of members over a finite domain.

    Members are output tables aligned with ``domain`` (free to evaluate) or
    DagPrograms of arity 1 (evaluation charged per binary node).
    """

    name = "finite"
    default = 0

    def __init__(self, domain, members, k: int):
        if k < 2:
            raise ValidationError("codomain size k must be at least 2")
        self.domain = tuple(domain)
        self._index = {x: i for i, x in enumerate(self.domain)}
        self.table = list(members)
        self.k = k
        if not self.table:
            raise ValidationError("a finite family needs at least one member")
        for m in self.table:
            if isinstance(m, DagProgram):
                if m.arity != 1:
                    raise ValidationError("program members must have arity 1")
            elif len(m) != len(self.domain) or not all(0 <= v < k for v in m):
                raise ValidationError("table members must list an output in range(k) per domain point")
        self.uses_programs = any(isinstance(m, DagProgram) for m in self.table)
        self.opt_std = None

    def params(self):
        return {"size": len(self.table), "domain": len(self.domain), "k": self.k}

    def facts(self):
        return {"opt_std_upper": len(self.table) - 1}

    def codomain(self):
        return list(range(self.k))

    def check_input(self, x):
        if x not in self._index:
            raise DomainMismatch(f"{x!r} is not in the finite domain")

    def evaluate(self, member, x, meter: OpMeter = FREE):
        m = self.table[member]
        if isinstance(m, DagProgram):
            return int(eval_dag(m, [Fraction(x)], meter)[0])
        return m[self._index[x]]

    def members(self):
        return range(len(self.table))

    def consistent(self, constraints) -> Consistency:
        return enumerate_consistent(self, constraints)

    def random_member(self, rng):
        return rng.randrange(len(self.table))

    def random_input(self, rng):
        return rng.choice(self.domain)

    def parse_member(self, obj):
        i = int(obj)
        if not 0 <= i < len(self.table):
            raise ValidationError(f"member index {i} out of range")
        return i


def random_finite_family(rng: random.Random, size: int, domain_size: int, k: int) -> FiniteExplicit:
    """Random family of ``size`` distinct tables over range(domain_size)."""
    if size > k ** domain_size:
        raise ValidationError("not enough distinct tables")
    seen, tables = set(), []
    while len(tables) < size:
        t = tuple(rng.randrange(k) for _ in range(domain_size))
        if t not in seen:
            seen.add(t)
            tables.append(t)
    return FiniteExplicit(range(domain_size), tables, k)


def affine_mod_family(k: int, coeffs, domain=None) -> FiniteExplicit:
    """Members x -> (c0 x + c1) mod k as five-operation programs."""
    members = [affine_mod_dag(c0, c1, k) for c0, c1 in coeffs]
    return FiniteExplicit(domain if domain is not None else range(k), members, k)


class FloorParity(Family):
    """f_x(d) = floor(d x) - 2 floor(d x / 2) for x in (0, 1) and positive integers d.

    On d = 2^j the output is the j-th binary digit of x after the point.
    """

    name = "floor_parity"
    default = 0
    k = 2
    opt_std = None
    eval_cost = 3

    def facts(self):
        return {"opt_std": "infinite", "W_F": 3, "L_F": "infinite"}

    def codomain(self):
        return [0, 1]

    def check_input(self, d):
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise DomainMismatch(f"{self.name} expects a positive integer, got {d!r}")

    def evaluate(self, member, d, meter: OpMeter = FREE):
        t = meter.mul(Fraction(d), member)
        h = meter.div(t, Fraction(2))
        return int(meter.sub(Fraction(t.__floor__()), 2 * Fraction(h.__floor__())))

    @staticmethod
    def allowed(d: int, bit: int, lo: Fraction, hi: Fraction) -> list:
        """Sub-intervals of [lo, hi) where floor(d x) has parity ``bit``."""
        out = []
        m0 = (lo * d).__floor__()
        m = m0
        while Fraction(m, d) < hi:
            if m % 2 == bit:
                a, b = max(lo, Fraction(m, d)), min(hi, Fraction(m + 1, d))
                if a < b:
                    out.append((a, b))
            m += 1
        return out

    def consistent(self, constraints) -> Consistency:
        bits = {}
        for c in constraints:
            self.check_input(c.x)
            if c.y not in (0, 1):
                if isinstance(c, Equals):
                    return Consistency(False)
                continue
            bit = c.y if isinstance(c, Equals) else 1 - c.y
            if bits.setdefault(c.x, bit) != bit:
                return Consistency(False)
        intervals = [(Fraction(0), Fraction(1))]
        for d in sorted(bits):
            intervals = [iv for lo, hi in intervals for iv in self.allowed(d, bits[d], lo, hi)]
            if not intervals:
                return Consistency(False)
        lo, hi = intervals[0]
        return Consistency(True, (lo + hi) / 2)

    def random_member(self, rng):
        return Fraction(rng.randrange(1, 2 ** 20), 2 ** 20)

    def random_input(self, rng):
        return 2 ** rng.randint(1, 12)

    def parse_member(self, obj):
        x = Fraction(obj)
        if not 0 < x < 1:
            raise ValidationError("floor-parity members are rationals in (0, 1)")
        return x


def digit_interval(bits) -> tuple:
    """[lo, hi) of the numbers in [0, 1) whose leading binary digits are ``bits``."""
    lo = sum(Fraction(b, 2 ** (j + 1)) for j, b in enumerate(bits))
    return lo, lo + Fraction(1, 2 ** len(bits))

