"""Scalar fields used by the row-reduction routines.

One field operation charges one meter unit, for rationals and for GF(p) alike.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DivisionByZero, ValidationError
from .meter import OpMeter, binary_op


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class RationalField:
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, v):
        return Fraction(v)

    def add(self, a, b, meter: OpMeter):
        return binary_op("add", a, b, meter)

    def sub(self, a, b, meter: OpMeter):
        return binary_op("sub", a, b, meter)

    def mul(self, a, b, meter: OpMeter):
        return binary_op("mul", a, b, meter)

    def div(self, a, b, meter: OpMeter):
        return binary_op("div", a, b, meter)

    def neg(self, a):
        return -a

    def elements(self):
        raise TypeError("the rationals are infinite")

    @property
    def size(self):
        return None


QQ = RationalField()


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"{self.p} is not prime")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    @property
    def size(self):
        return self.p

    def coerce(self, v):
        if isinstance(v, Fraction):
            if v.denominator != 1:
                return v.numerator * pow(v.denominator, -1, self.p) % self.p
            v = v.numerator
        return int(v) % self.p

    def add(self, a, b, meter: OpMeter):
        meter.charge()
        return (a + b) % self.p

    def sub(self, a, b, meter: OpMeter):
        meter.charge()
        return (a - b) % self.p

    def mul(self, a, b, meter: OpMeter):
        meter.charge()
        return (a * b) % self.p

    def div(self, a, b, meter: OpMeter):
        if b % self.p == 0:
            raise DivisionByZero(f"division by zero in GF({self.p})")
        meter.charge()
        return (a * pow(b, self.p - 2, self.p)) % self.p

    def neg(self, a):
        return (-a) % self.p

    def elements(self):
        return range(self.p)
