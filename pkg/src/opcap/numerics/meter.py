"""Counted arithmetic.

A scalar is either an exact ``Fraction`` or, in approximate mode, a ``float``.
Every binary operation goes through :func:`binary_op` and charges exactly one
unit to an :class:`OpMeter`; unary operations never charge.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from ..errors import CapExceeded, DivisionByZero, DomainError, InexactUnary, SealedMeter

Scalar = Union[Fraction, float]

BINARY_KINDS = ("add", "sub", "mul", "div")
UNARY_KINDS = ("identity", "const", "floor", "ceil", "abs", "sqrt", "exp", "ln")
# pieces of a piecewise node may apply a binary op to x and a constant; free
CONST_KINDS = ("addc", "subc", "mulc", "divc")

REL_TOL = 1e-9


def scalar(value, exact: bool = True) -> Scalar:
    """Coerce ints, strings like ``"3/4"``, Fractions and floats to a Scalar."""
    if not exact:
        return float(Fraction(value)) if isinstance(value, str) else float(value)
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


def approx_equal(a, b, rel: float = REL_TOL) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=rel, abs_tol=rel)


class OpMeter:
    """Per-round counter of binary arithmetic operations.

    ``cap=None`` means unlimited. The engine resets the meter at the start of
    every round and seals it once the learner has answered.
    """

    def __init__(self, cap: int | None = None):
        if cap is not None and cap < 0:
            raise ValueError("cap must be nonnegative")
        self.cap = cap
        self.used = 0
        self.total = 0
        self.sealed = False

    def __repr__(self):
        return f"OpMeter(cap={self.cap}, used={self.used}, sealed={self.sealed})"

    @property
    def remaining(self):
        return None if self.cap is None else self.cap - self.used

    def reset(self):
        self.used = 0
        self.sealed = False

    def seal(self):
        self.sealed = True

    def charge(self):
        if self.sealed:
            raise SealedMeter("arithmetic after the answer was given")
        if self.cap is not None and self.used + 1 > self.cap:
            raise CapExceeded(self.cap, self.used + 1)
        self.used += 1
        self.total += 1

    def add(self, a, b):
        return binary_op("add", a, b, self)

    def sub(self, a, b):
        return binary_op("sub", a, b, self)

    def mul(self, a, b):
        return binary_op("mul", a, b, self)

    def div(self, a, b):
        return binary_op("div", a, b, self)


class FreeMeter(OpMeter):
    """Meter that never charges; used by oracles and certification code."""

    def __init__(self):
        super().__init__(None)

    def charge(self):
        pass

    def seal(self):
        pass


FREE = FreeMeter()


def binary_op(kind: str, lhs: Scalar, rhs: Scalar, meter: OpMeter) -> Scalar:
    if kind not in BINARY_KINDS:
        raise ValueError(f"unknown binary op {kind!r}")
    if meter.sealed:
        raise SealedMeter("arithmetic after the answer was given")
    if kind == "div" and rhs == 0:
        raise DivisionByZero("division by zero")
    meter.charge()
    if kind == "add":
        return lhs + rhs
    if kind == "sub":
        return lhs - rhs
    if kind == "mul":
        return lhs * rhs
    return lhs / rhs


def _exact_sqrt(x: Fraction) -> Fraction:
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise InexactUnary(f"sqrt({x}) is irrational")
    return Fraction(rn, rd)


def unary_op(kind: str, x: Scalar, c: Scalar | None = None) -> Scalar:
    """Apply a free unary operation.

    Exactness follows the operand: Fractions stay exact (and sqrt/exp/ln raise
    InexactUnary when the result is irrational), floats use ``math``.
    """
    exact = isinstance(x, (Fraction, int))
    if kind == "identity":
        return x
    if kind == "const":
        if c is None:
            raise ValueError("const needs a value")
        return c
    if kind == "floor":
        return Fraction(math.floor(x)) if exact else float(math.floor(x))
    if kind == "ceil":
        return Fraction(math.ceil(x)) if exact else float(math.ceil(x))
    if kind == "abs":
        return abs(x)
    if kind == "sqrt":
        if x < 0:
            raise DomainError(f"sqrt of negative value {x}")
        return _exact_sqrt(Fraction(x)) if exact else math.sqrt(x)
    if kind == "exp":
        if exact:
            if x != 0:
                raise InexactUnary(f"exp({x}) is irrational")
            return Fraction(1)
        return math.exp(x)
    if kind == "ln":
        if x <= 0:
            raise DomainError(f"ln of nonpositive value {x}")
        if exact:
            if x != 1:
                raise InexactUnary(f"ln({x}) is irrational")
            return Fraction(0)
        return math.log(x)
    if kind in CONST_KINDS:
        if c is None:
            raise ValueError(f"{kind} needs a constant")
        if kind == "addc":
            return x + c
        if kind == "subc":
            return x - c
        if kind == "mulc":
            return x * c
        if c == 0:
            raise DivisionByZero("division by zero constant")
        return x / c
    raise ValueError(f"unknown unary op {kind!r}")
