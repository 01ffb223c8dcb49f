from .fields import QQ, PrimeField, RationalField, is_prime
from .fme import feasible_point
from .linalg import (
    dot,
    drain,
    nullspace,
    rank,
    rref,
    rref_op_bound,
    rref_steps,
    solve,
    solve_steps,
    span_coeffs,
    span_coeffs_steps,
    span_op_bound,
)
from .meter import FREE, FreeMeter, OpMeter, Scalar, approx_equal, binary_op, scalar, unary_op

__all__ = [
    "QQ", "PrimeField", "RationalField", "is_prime", "feasible_point",
    "dot", "drain", "nullspace", "rank", "rref", "rref_op_bound", "rref_steps", "solve", "solve_steps",
    "span_coeffs", "span_coeffs_steps", "span_op_bound",
    "FREE", "FreeMeter", "OpMeter", "Scalar", "approx_equal", "binary_op", "scalar", "unary_op", "meter_cycle",
]


def meter_cycle(meter: OpMeter, action: str = "reset") -> None:
    """Round lifecycle hook: ``reset`` at round start, ``seal`` once answered."""
    if action == "reset":
        meter.reset()
    elif action == "seal":
        meter.seal()
    else:
        raise ValueError(f"unknown meter action {action!r}")
