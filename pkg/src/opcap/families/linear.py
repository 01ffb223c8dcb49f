"""Families that are linear in (a feature map of) the input."""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from ..errors import DomainMismatch, UnsupportedConstraintPattern, ValidationError
from ..numerics import FREE, OpMeter, PrimeField, dot, feasible_point, nullspace, solve
from ..numerics.fields import QQ
from ..values import LogitCanonical, Tagged
from .base import AffineFamily, Consistency, split


def _rand_q(rng: random.Random, lo=-3, hi=3, den=2) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def _vec(x, n, name):
    if not isinstance(x, tuple) or len(x) != n:
        raise DomainMismatch(f"{name} expects a tuple of length {n}, got {x!r}")


class LinearReal(AffineFamily):
    """f_v(x) = v . x over the rationals."""

    name = "linear_real"
    default = Fraction(0)

    def __init__(self, n: int):
        if n < 1:
            raise ValidationError("n must be positive")
        self.n = self.dim = n
        self.opt_std = n
        self.eval_cost = 2 * n - 1

    def params(self):
        return {"n": self.n}

    def check_input(self, x):
        _vec(x, self.n, self.name)

    def evaluate(self, member, x, meter: OpMeter = FREE):
        return dot(member, x, QQ, meter)

    def features(self, x, meter=FREE):
        return list(x)

    def targets(self, y):
        return (Fraction(y),) if isinstance(y, (int, Fraction)) else None

    def from_targets(self, vals):
        return vals[0]

    def member_from_theta(self, theta):
        return tuple(row[0] for row in theta)

    def random_member(self, rng):
        return tuple(_rand_q(rng) for _ in range(self.n))

    def random_input(self, rng):
        return tuple(Fraction(rng.randint(-4, 4)) for _ in range(self.n))

    def parse_member(self, obj):
        return tuple(Fraction(v) for v in obj)

    def unit(self, i):
        return tuple(Fraction(int(j == i)) for j in range(self.n))


class LinearField(AffineFamily):
    """f_v(x) = v . x over GF(p)."""

    name = "linear_field"
    default = 0

    def __init__(self, p: int, n: int):
        if n < 1:
            raise ValidationError("n must be positive")
        self.field = PrimeField(p)
        self.p, self.n, self.dim = p, n, n
        self.k = p
        self.opt_std = n
        self.eval_cost = 2 * n - 1

    def params(self):
        return {"p": self.p, "n": self.n}

    def codomain(self):
        return list(range(self.p))

    def check_input(self, x):
        _vec(x, self.n, self.name)
        if not all(isinstance(v, int) and 0 <= v < self.p for v in x):
            raise DomainMismatch(f"entries of {x!r} are not elements of GF({self.p})")

    def evaluate(self, member, x, meter: OpMeter = FREE):
        return dot(member, x, self.field, meter)

    def features(self, x, meter=FREE):
        return list(x)

    def targets(self, y):
        return (y,) if isinstance(y, int) and 0 <= y < self.p else None

    def from_targets(self, vals):
        return vals[0]

    def member_from_theta(self, theta):
        return tuple(row[0] for row in theta)

    def random_member(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.n))

    def random_input(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.n))

    def parse_member(self, obj):
        return tuple(int(v) % self.p for v in obj)

    def unit(self, i):
        return tuple(int(j == i) for j in range(self.n))

    def members(self):
        if self.p ** self.n > 4096:
            return None
        return itertools.product(range(self.p), repeat=self.n)


class BoundedDegreePoly(AffineFamily):
    """Polynomials in m variables with deg_{x_i} <= d_i, learned through monomial features.

    Monomial j has exponents given by the mixed-radix digits of j (radices d_i + 1).
    """

    name = "poly"
    default = Fraction(0)

    def __init__(self, degrees):
        degrees = tuple(int(d) for d in degrees)
        if not degrees or any(d < 0 for d in degrees):
            raise ValidationError("degrees must be a nonempty list of nonnegative integers")
        self.degrees = degrees
        self.m = len(degrees)
        self.dim = math.prod(d + 1 for d in degrees)
        self.opt_std = self.dim
        self.exponents = [self._digits(j) for j in range(self.dim)]

    def _digits(self, j):
        out = []
        for d in self.degrees:
            out.append(j % (d + 1))
            j //= d + 1
        return tuple(out)

    def params(self):
        return {"degrees": list(self.degrees)}

    def check_input(self, x):
        _vec(x, self.m, self.name)

    def features(self, x, meter: OpMeter = FREE):
        powers = []
        for xi, d in zip(x, self.degrees):
            pw = [Fraction(1), xi]
            for _ in range(2, d + 1):
                pw.append(meter.mul(pw[-1], xi))
            powers.append(pw)
        feats = []
        for e in self.exponents:
            parts = [powers[i][ei] for i, ei in enumerate(e) if ei > 0]
            if not parts:
                feats.append(Fraction(1))
                continue
            acc = parts[0]
            for p in parts[1:]:
                acc = meter.mul(acc, p)
            feats.append(acc)
        return feats

    def evaluate(self, member, x, meter: OpMeter = FREE):
        return dot(member, self.features(x, meter), QQ, meter)

    def targets(self, y):
        return (Fraction(y),) if isinstance(y, (int, Fraction)) else None

    def from_targets(self, vals):
        return vals[0]

    def member_from_theta(self, theta):
        return tuple(row[0] for row in theta)

    def random_member(self, rng):
        return tuple(_rand_q(rng) for _ in range(self.dim))

    def random_input(self, rng):
        return tuple(Fraction(rng.randint(-3, 3)) for _ in range(self.m))

    def parse_member(self, obj):
        return tuple(Fraction(v) for v in obj)

    def power_point(self, t):
        """Input (t, t^(d1+1), t^((d1+1)(d2+1)), ...) that turns members into univariate polynomials."""
        out, e = [], 1
        for d in self.degrees:
            out.append(Fraction(t) ** e)
            e *= d + 1
        return tuple(out)


ACTIVATIONS = ("leaky_relu", "relu", "sigmoid", "tanh")
# binary operations charged for the activation itself (the preimage is exact)
ACTIVATION_COST = {"leaky_relu": 0, "relu": 0, "sigmoid": 2, "tanh": 3}


class OneLayer(AffineFamily):
    """x -> act(w . x + b). Invertible activations output Tagged preimages."""

    name = "one_layer"

    def __init__(self, n: int, activation: str, alpha=None):
        if n < 1:
            raise ValidationError("n must be positive")
        if activation not in ACTIVATIONS:
            raise ValidationError(f"unknown activation {activation!r}")
        if activation == "leaky_relu":
            if alpha is None or Fraction(alpha) <= 0:
                raise ValidationError("leaky relu needs alpha > 0")
            alpha = Fraction(alpha)
        self.n, self.activation, self.alpha = n, activation, alpha
        self.dim = n + 1
        self.opt_std = n + 1
        self.eval_cost = 2 * n + ACTIVATION_COST[activation]
        self.default = self.output(Fraction(0))

    @property
    def invertible(self):
        return self.activation != "relu"

    def params(self):
        d = {"n": self.n, "activation": self.activation}
        if self.alpha is not None:
            d["alpha"] = str(self.alpha)
        return d

    def output(self, z):
        if self.activation == "relu":
            return max(Fraction(z), Fraction(0))
        return Tagged(self.activation, Fraction(z))

    def check_input(self, x):
        _vec(x, self.n, self.name)

    def preactivation(self, member, x, meter):
        w, b = member
        return meter.add(dot(w, x, QQ, meter), b)

    def evaluate(self, member, x, meter: OpMeter = FREE):
        z = self.preactivation(member, x, meter)
        for _ in range(ACTIVATION_COST[self.activation]):
            meter.charge()
        return self.output(z)

    def features(self, x, meter=FREE):
        return list(x) + [Fraction(1)]

    def targets(self, y):
        if self.activation == "relu":
            return (Fraction(y),) if isinstance(y, (int, Fraction)) and y > 0 else None
        if isinstance(y, Tagged) and y.act == self.activation:
            return (y.preimage,)
        return None

    def from_targets(self, vals):
        return self.output(vals[0])

    def member_from_theta(self, theta):
        return tuple(row[0] for row in theta[:-1]), theta[-1][0]

    def random_member(self, rng):
        return tuple(_rand_q(rng) for _ in range(self.n)), _rand_q(rng)

    def random_input(self, rng):
        return tuple(Fraction(rng.randint(-4, 4)) for _ in range(self.n))

    def parse_member(self, obj):
        return tuple(Fraction(v) for v in obj["w"]), Fraction(obj["b"])

    def consistent(self, constraints) -> Consistency:
        if self.activation != "relu":
            return super().consistent(constraints)
        return self._relu_consistent(constraints)

    def _relu_consistent(self, constraints) -> Consistency:
        """Positive outputs pin w.x+b; zero outputs only bound it from above."""
        eq, neq = split(constraints)
        if neq:
            raise UnsupportedConstraintPattern("exclusions are not supported for relu networks")
        pos_rows, pos_t, zero_rows = [], [], []
        for c in eq:
            self.check_input(c.x)
            y = c.y
            if not isinstance(y, (int, Fraction)) or y < 0:
                return Consistency(False)
            if y > 0:
                pos_rows.append(self.features(c.x))
                pos_t.append([Fraction(y)])
            else:
                zero_rows.append(self.features(c.x))
        sol = solve(pos_rows, pos_t, QQ, FREE, n=self.dim)
        if sol is None:
            return Consistency(False)
        part = [row[0] for row in sol.particular]
        basis = nullspace(sol.reduced, sol.pivots, self.dim, QQ)
        ineqs = []
        for r in zero_rows:
            coeffs = [sum(a * b for a, b in zip(r, vec)) for vec in basis]
            ineqs.append((coeffs, -sum(a * b for a, b in zip(r, part))))
        t = feasible_point(ineqs, len(basis))
        if t is None:
            return Consistency(False)
        theta = [p + sum(tj * vec[i] for tj, vec in zip(t, basis)) for i, p in enumerate(part)]
        return Consistency(True, self.member_from_theta([[v] for v in theta]))

    def basis_claims(self):
        return [self.output(Fraction(0)), self.output(Fraction(1))]


class SoftmaxLayer(AffineFamily):
    """x -> softmax(A x + b) with k classes, reported as LogitCanonical differences."""

    name = "softmax"

    def __init__(self, n: int, k: int):
        if n < 1 or k < 2:
            raise ValidationError("softmax needs n >= 1 and k >= 2")
        self.n, self.classes = n, k
        self.dim, self.q = n + 1, k - 1
        self.opt_std = n + 1
        self.eval_cost = 2 * n * k + k - 1
        self.default = LogitCanonical(tuple(Fraction(0) for _ in range(k - 1)))

    def params(self):
        return {"n": self.n, "k": self.classes}

    def check_input(self, x):
        _vec(x, self.n, self.name)

    def evaluate(self, member, x, meter: OpMeter = FREE):
        a, b = member
        logits = [meter.add(dot(row, x, QQ, meter), bi) for row, bi in zip(a, b)]
        return LogitCanonical(tuple(meter.sub(v, logits[0]) for v in logits[1:]))

    def features(self, x, meter=FREE):
        return list(x) + [Fraction(1)]

    def targets(self, y):
        if isinstance(y, LogitCanonical) and len(y.diffs) == self.q:
            return tuple(Fraction(d) for d in y.diffs)
        return None

    def from_targets(self, vals):
        return LogitCanonical(tuple(vals))

    def member_from_theta(self, theta):
        zero = tuple(Fraction(0) for _ in range(self.n))
        a = [zero] + [tuple(theta[j][i] for j in range(self.n)) for i in range(self.q)]
        b = [Fraction(0)] + [theta[self.n][i] for i in range(self.q)]
        return tuple(a), tuple(b)

    def random_member(self, rng):
        a = tuple(tuple(_rand_q(rng) for _ in range(self.n)) for _ in range(self.classes))
        return a, tuple(_rand_q(rng) for _ in range(self.classes))

    def random_input(self, rng):
        return tuple(Fraction(rng.randint(-4, 4)) for _ in range(self.n))

    def parse_member(self, obj):
        a = tuple(tuple(Fraction(v) for v in row) for row in obj["a"])
        return a, tuple(Fraction(v) for v in obj["b"])

