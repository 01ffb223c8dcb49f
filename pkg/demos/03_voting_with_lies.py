# Weighted copies of a finite-family learner under an adversary allowed a few lies.
# Each meta-mistake shrinks the total weight by a fixed factor, which is audited exactly.
import random

from opcap.adversaries import hidden_function_adversary, lying_wrapper
from opcap.engine import AgnosticStrong, GameConfig, run_game
from opcap.families import random_finite_family
from opcap.learners import SequentialElimination
from opcap.reductions import agnostic_strong_majority, agnostic_strong_restart, strong_bound

k, M = 4, 2
family = random_finite_family(random.Random(1), M + 1, 6, k)
for eta in (0, 1, 2):
    schedule = list(range(3, 3 + 2 * eta, 2))
    for make, label in ((agnostic_strong_majority, "voting"), (agnostic_strong_restart, "restart")):
        adv = lying_wrapper(hidden_function_adversary(family, 0, rounds=40, seed=eta), eta, schedule)
        learner = make(family, lambda: SequentialElimination(family), M)
        tr = run_game(family, learner, adv, AgnosticStrong(eta), GameConfig(max_rounds=40))
        extra = ""
        if label == "voting":
            ratios = learner.decay_ratios()
            extra = f" worst decay {max(ratios, default=0)} (limit 5/6), bound {strong_bound(M, eta, k):.1f}"
        else:
            extra = f" restarts {learner.restarts}, bound {learner.mistake_bound(eta)}"
        print(f"eta={eta} {label:>7}: lies at {adv.lies}, mistakes={tr.mistakes},{extra}, "
              f"certified with {tr.certification['disagreements']} disagreements")
