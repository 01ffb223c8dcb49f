"""Two-layer (leaky) relu networks shaped as approximate interval indicators."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainMismatch, UnsupportedConstraintPattern, ValidationError
from ..numerics import FREE, OpMeter
from ..values import Equals
from .base import Consistency, Family


def leaky(z: Fraction, alpha: Fraction) -> Fraction:
    return z if z > 0 else alpha * z


@dataclass(frozen=True)
class IndicatorNet:
    """(1/((1-a) eps)) (R(x-(c+eps)) + R(x+eps) - R(x-c) - R(x)) with R = leaky relu of slope a.

    Equals 1 on [0, c] and 0 outside (-eps, c + eps).
    """

    c: Fraction
    eps: Fraction
    alpha: Fraction = Fraction(0)

    def __post_init__(self):
        if self.eps <= 0:
            raise ValidationError("eps must be positive")
        if not 0 <= self.alpha < 1:
            raise ValidationError("slope must lie in [0, 1)")
        if self.c < 0:
            raise ValidationError("c must be nonnegative")

    @property
    def hidden_layer(self):
        """(input weight, bias) of the four hidden neurons and their output weights."""
        s = 1 / ((1 - self.alpha) * self.eps)
        return [((1, -(self.c + self.eps)), s), ((1, self.eps), s), ((1, -self.c), -s), ((1, 0), -s)]

    def __call__(self, x, meter: OpMeter = FREE) -> Fraction:
        x = Fraction(x)
        acc = None
        for (w, b), out_w in self.hidden_layer:
            pre = meter.add(x, Fraction(b))  # w is 1; the bias add is a binary op
            term = meter.mul(leaky(pre, self.alpha), Fraction(out_w))
            acc = term if acc is None else meter.add(acc, term)
        return acc


def indicator_witness(c, eps, alpha, probes=()) -> tuple:
    """Build the four-neuron indicator network and check it on ``probes``.

    Returns ``(net, ok)`` where ok says every probe in [0, c] evaluated to 1
    and every probe in (-inf, -eps] or [c + eps, inf) evaluated to 0, exactly.
    """
    net = IndicatorNet(Fraction(c), Fraction(eps), Fraction(alpha))
    ok = True
    for p in probes:
        p = Fraction(p)
        v = net(p)
        if 0 <= p <= net.c:
            ok &= v == 1
        elif p <= -net.eps or p >= net.c + net.eps:
            ok &= v == 0
    return net, ok


class TwoLayerReluIndicator(Family):
    """Indicator-shaped two-layer networks on the real line.

    Members are IndicatorNet(c, eps, alpha); ``eps`` pins the width when
    given, otherwise any positive width is allowed. Only 0/1 output claims
    are decided; other values raise UnsupportedConstraintPattern.
    """

    name = "two_layer_indicator"
    default = Fraction(0)
    opt_std = None
    eval_cost = 11

    def __init__(self, alpha=0, eps=None):
        self.alpha = Fraction(alpha)
        if not 0 <= self.alpha < 1:
            raise ValidationError("slope must lie in [0, 1)")
        self.eps = None if eps is None else Fraction(eps)
        if self.eps is not None and self.eps <= 0:
            raise ValidationError("eps must be positive")

    def params(self):
        d = {"alpha": str(self.alpha)}
        if self.eps is not None:
            d["eps"] = str(self.eps)
        return d

    def facts(self):
        return {"opt_std": "infinite", "W_F": self.eval_cost, "L_F": "infinite"}

    def check_input(self, x):
        if not isinstance(x, (int, Fraction)):
            raise DomainMismatch(f"{self.name} expects a rational, got {x!r}")

    def evaluate(self, member, x, meter: OpMeter = FREE):
        return member(x, meter)

    def consistent(self, constraints) -> Consistency:
        ones, zeros = [], []
        for c in constraints:
            self.check_input(c.x)
            if not isinstance(c, Equals) or c.y not in (0, 1):
                raise UnsupportedConstraintPattern("only 0/1 output claims are decided for indicator networks")
            (ones if c.y == 1 else zeros).append(Fraction(c.x))
        if ones and min(ones) < 0:
            return Consistency(False)
        cval = max(ones, default=Fraction(0))
        # widest eps that keeps every zero claim outside (-eps, c + eps)
        limit = None
        for z in zeros:
            if 0 <= z <= cval:
                return Consistency(False)
            gap = z - cval if z > cval else -z
            limit = gap if limit is None else min(limit, gap)
        if self.eps is not None:
            if limit is not None and self.eps > limit:
                return Consistency(False)
            eps = self.eps
        else:
            eps = Fraction(1) if limit is None else limit / 2
        return Consistency(True, IndicatorNet(cval, eps, self.alpha))

    def random_member(self, rng):
        eps = self.eps if self.eps is not None else Fraction(1, rng.randint(2, 16))
        return IndicatorNet(Fraction(rng.randint(0, 16), 16), eps, self.alpha)

    def random_input(self, rng):
        return Fraction(rng.randint(-32, 48), 32)

    def parse_member(self, obj):
        eps = obj.get("eps", self.eps)
        return IndicatorNet(Fraction(obj["c"]), Fraction(eps), self.alpha)
