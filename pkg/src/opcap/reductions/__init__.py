"""Meta-learners that turn standard learners into learners for harder protocols."""
from .order import CombinedStarLearner, OrderReduction, combined_star_learner, order_reduction
from .restart import RestartLearner, agnostic_strong_restart
from .voting import (
    MAX_COPIES, AgnosticStrongMajority, AgnosticWeakMajority, AmbiguousMajority, BanditMajority,
    VotingLearner, WeightedCopy, agnostic_strong_majority, agnostic_weak_majority, ambiguous_majority,
    bandit_alpha, bandit_bound, bandit_bound_holds, bandit_majority, largest_within, strong_bound,
    strong_bound_holds, weak_bound, weak_bound_holds,
)

__all__ = [
    "CombinedStarLearner", "OrderReduction", "combined_star_learner", "order_reduction",
    "RestartLearner", "agnostic_strong_restart",
    "MAX_COPIES", "AgnosticStrongMajority", "AgnosticWeakMajority", "AmbiguousMajority", "BanditMajority",
    "VotingLearner", "WeightedCopy", "agnostic_strong_majority", "agnostic_weak_majority",
    "ambiguous_majority", "bandit_alpha", "bandit_bound", "bandit_bound_holds", "bandit_majority",
    "largest_within", "strong_bound", "strong_bound_holds", "weak_bound", "weak_bound_holds",
]
