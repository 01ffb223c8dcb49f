"""Catalogue of function families with counted evaluation and consistency oracles."""
from .base import (
    AffineFamily,
    Consistency,
    Family,
    HiddenFunction,
    disagreements,
    enumerate_consistent,
    evaluate,
    satisfies,
    solve_affine,
    within_budget,
)
from .cart import CartFamily, cart_lift
from .discrete import (
    CombinedStar,
    FiniteExplicit,
    FloorParity,
    ReciprocalPair,
    ReciprocalTuple,
    SparseSupport,
    affine_mod_family,
    digit_interval,
    random_finite_family,
)
from .linear import ACTIVATION_COST, BoundedDegreePoly, LinearField, LinearReal, OneLayer, SoftmaxLayer
from .networks import IndicatorNet, TwoLayerReluIndicator, indicator_witness

__all__ = [
    "AffineFamily", "Consistency", "Family", "HiddenFunction", "disagreements",
    "enumerate_consistent", "evaluate", "satisfies", "solve_affine", "within_budget",
    "CartFamily", "cart_lift", "CombinedStar", "FiniteExplicit", "FloorParity",
    "ReciprocalPair", "ReciprocalTuple", "SparseSupport", "affine_mod_family",
    "digit_interval", "random_finite_family", "ACTIVATION_COST", "BoundedDegreePoly",
    "LinearField", "LinearReal", "OneLayer", "SoftmaxLayer", "IndicatorNet",
    "TwoLayerReluIndicator", "indicator_witness",
]
