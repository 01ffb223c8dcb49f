"""Output values, constraints and feedback messages exchanged during a game."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, is_dataclass
from fractions import Fraction

from .numerics.meter import approx_equal


@dataclass(frozen=True)
class Tagged:
    """Output ``act(preimage)`` of an invertible activation, kept exact by its preimage."""

    act: str
    preimage: Fraction

    def to_real(self, alpha=None) -> float:
        return activation_value(self.act, float(self.preimage), alpha)


@dataclass(frozen=True)
class LogitCanonical:
    """Softmax output stored as ln(y_i / y_0) for i = 1..k-1."""

    diffs: tuple

    def to_probs(self) -> tuple:
        logits = [0.0] + [float(d) for d in self.diffs]
        top = max(logits)
        ex = [math.exp(v - top) for v in logits]
        s = sum(ex)
        return tuple(v / s for v in ex)

    @staticmethod
    def from_probs(probs) -> "LogitCanonical":
        return LogitCanonical(tuple(math.log(p / probs[0]) for p in probs[1:]))


@dataclass(frozen=True)
class Left:
    """Field-vector half of the disjoint-union domain."""

    vec: tuple


@dataclass(frozen=True)
class Right:
    """Integer half of the disjoint-union domain."""

    n: int


@dataclass(frozen=True)
class Equals:
    x: object
    y: object


@dataclass(frozen=True)
class NotEquals:
    x: object
    y: object


@dataclass(frozen=True)
class Reveal:
    """Standard feedback: the (claimed) true output."""

    value: object


@dataclass(frozen=True)
class Verdict:
    """Bandit feedback: whether the answer (or whole batch) was right."""

    correct: bool


def activation_value(act: str, z: float, alpha=None) -> float:
    if act == "leaky_relu":
        return z if z > 0 else float(alpha) * z
    if act == "sigmoid":
        return 1.0 / (1.0 + math.exp(-z))
    if act == "tanh":
        return math.tanh(z)
    if act == "relu":
        return max(z, 0.0)
    raise ValueError(f"unknown activation {act!r}")


def activation_inverse(act: str, y: float, alpha=None) -> float:
    if act == "leaky_relu":
        return y if y > 0 else y / float(alpha)
    if act == "sigmoid":
        return math.log(y / (1.0 - y))
    if act == "tanh":
        return 0.5 * math.log((1.0 + y) / (1.0 - y))
    raise ValueError(f"activation {act!r} is not invertible")


def values_equal(a, b, rel=None) -> bool:
    """Equality of output values; ``rel`` enables float tolerance for float leaves."""
    if rel is None:
        return a == b
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(values_equal(u, v, rel) for u, v in zip(a, b))
    if is_dataclass(a) and type(a) is type(b):
        return all(values_equal(getattr(a, f.name), getattr(b, f.name), rel) for f in fields(a))
    if isinstance(a, (int, float, Fraction)) and isinstance(b, (int, float, Fraction)):
        return approx_equal(a, b, rel)
    return a == b


def sort_key(v):
    """Total order used for deterministic tie-breaking between output values."""
    if isinstance(v, (int, Fraction, float)):
        return (0, Fraction(v), "")
    if isinstance(v, Tagged):
        return (0, Fraction(v.preimage), v.act)
    if isinstance(v, LogitCanonical):
        return (1, Fraction(0), tuple(Fraction(d) for d in v.diffs))
    if isinstance(v, tuple):
        return (2, Fraction(0), tuple(sort_key(u) for u in v))
    return (3, Fraction(0), repr(v))


def encode(v):
    """JSON-friendly encoding; rationals become exact ``"p/q"`` strings."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return v
    if isinstance(v, (tuple, list)):
        return [encode(u) for u in v]
    if isinstance(v, Tagged):
        return {"tagged": v.act, "preimage": str(v.preimage)}
    if isinstance(v, LogitCanonical):
        return {"logits": [encode(d) for d in v.diffs]}
    if isinstance(v, Left):
        return {"left": encode(v.vec)}
    if isinstance(v, Right):
        return {"right": v.n}
    if isinstance(v, Reveal):
        return {"reveal": encode(v.value)}
    if isinstance(v, Verdict):
        return {"verdict": v.correct}
    if isinstance(v, dict):
        return {str(k): encode(u) for k, u in v.items()}
    return repr(v)
