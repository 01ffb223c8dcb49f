"""Concrete learners. All arithmetic happens inside ``answer`` and is charged to the round's meter."""
from .base import BinaryBanditAdapter, Learner
from .basic import (
    ConstantLearner,
    FixedHypothesis,
    RandomGuess,
    ReciprocalCheck,
    SequentialElimination,
    ZeroDefaultMemorizer,
    default_candidates,
)
from .phase import Certificate, PhaseWrapper, phase_wrapper
from .span import (
    CAP_CONSTANT,
    ReluLearner,
    SpanLearner,
    affine_activation_learner,
    poly_learner,
    relu_learner,
    softmax_learner,
    span_learner,
)


def zero_default_memorizer(family):
    return ZeroDefaultMemorizer(family)


def reciprocal_check_learner(family):
    return ReciprocalCheck(family)


def sequential_elimination(family):
    return SequentialElimination(family)


__all__ = [
    "BinaryBanditAdapter", "Learner", "ConstantLearner", "FixedHypothesis", "RandomGuess",
    "ReciprocalCheck", "SequentialElimination", "ZeroDefaultMemorizer", "default_candidates",
    "Certificate", "PhaseWrapper", "phase_wrapper", "CAP_CONSTANT", "ReluLearner", "SpanLearner",
    "affine_activation_learner", "poly_learner", "relu_learner", "softmax_learner", "span_learner",
    "zero_default_memorizer", "reciprocal_check_learner", "sequential_elimination",
]
