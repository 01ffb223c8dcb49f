import math
import random
from fractions import Fraction as F

import pytest

from opcap.adversaries import (
    combined_star_adversary, hidden_function_adversary, lying_wrapper,
)
from opcap.engine import (
    AgnosticStrong, AgnosticWeak, Bandit, DelayedAmbiguous, GameConfig, Standard, run_game,
)
from opcap.families import CombinedStar, LinearReal, random_finite_family
from opcap.learners import SequentialElimination, SpanLearner
from opcap.reductions import (
    agnostic_strong_majority, agnostic_strong_restart, agnostic_weak_majority, ambiguous_majority,
    bandit_alpha, bandit_majority, combined_star_learner, largest_within, order_reduction,
    strong_bound_holds, weak_bound, weak_bound_holds,
)


def fam(k, M, seed):
    return random_finite_family(random.Random(seed), M + 1, 6, k)


def factory_for(f):
    return lambda: SequentialElimination(f)


def test_bandit_alpha_is_rational_and_close():
    for k in (2, 3, 5, 10):
        a = bandit_alpha(k)
        assert isinstance(a, F)
        assert abs(float(a) - 1 / (k * math.log(k))) < 1e-12


def test_closed_form_bounds():
    # (5/6)^m >= (1/3)(1/6)^1 for m <= 15
    assert largest_within(lambda m: strong_bound_holds(m, 1, 1, 2)) == 15
    assert largest_within(lambda m: strong_bound_holds(m, 1, 0, 2)) == 6
    # k=3, M=1, eta=1: closed form 27.98, so 27 integer rounds and a ceiling of 28
    assert largest_within(lambda m: weak_bound_holds(m, 1, 1, 3)) == 27
    assert math.ceil(weak_bound(1, 1, 3)) == 28


@pytest.mark.parametrize("k,M", [(2, 1), (3, 1), (3, 2), (4, 2)])
def test_bandit_majority_weight_decay(k, M):
    f = fam(k, M, 11 * k + M)
    for hid in range(M + 1):
        learner = bandit_majority(f, factory_for(f), M)
        tr = run_game(f, learner, hidden_function_adversary(f, hid, rounds=40, seed=hid), Bandit(),
                      GameConfig(max_rounds=40))
        assert tr.clean
        assert all(ratio <= learner.decay_factor for ratio in learner.decay_ratios())
        # weight retained by the consistent copy never drops below alpha^M
        assert learner.total_weight() >= learner.alpha ** M


@pytest.mark.parametrize("eta", [0, 1, 2])
def test_agnostic_strong_majority_within_bound(eta):
    k, M = 3, 2
    for seed in range(4):
        f = fam(k, M, seed)
        rng = random.Random(seed)
        sched = sorted(rng.sample(range(1, 25), eta))
        adv = lying_wrapper(hidden_function_adversary(f, rng.randrange(M + 1), rounds=25, seed=seed), eta, sched)
        learner = agnostic_strong_majority(f, factory_for(f), M)
        tr = run_game(f, learner, adv, AgnosticStrong(eta), GameConfig(max_rounds=25))
        assert tr.clean
        assert strong_bound_holds(tr.mistakes, M, eta, k)
        assert all(r <= F(5, 6) for r in learner.decay_ratios())


@pytest.mark.parametrize("eta", [0, 1, 2])
def test_agnostic_weak_majority_within_bound(eta):
    k, M = 4, 1
    for seed in range(4):
        f = fam(k, M, 50 + seed)
        rng = random.Random(seed)
        sched = sorted(rng.sample(range(1, 25), eta))
        adv = lying_wrapper(hidden_function_adversary(f, rng.randrange(M + 1), rounds=25, seed=seed), eta, sched,
                            "weak")
        learner = agnostic_weak_majority(f, factory_for(f), M)
        tr = run_game(f, learner, adv, AgnosticWeak(eta), GameConfig(max_rounds=25))
        assert tr.clean
        assert weak_bound_holds(tr.mistakes, M, eta, k)
        assert all(r <= learner.decay_factor for r in learner.decay_ratios())


def test_restart_example_m2_eta1():
    k, M, eta = 3, 2, 1
    worst = 0
    for seed in range(10):
        f = fam(k, M, 200 + seed)
        adv = lying_wrapper(hidden_function_adversary(f, seed % (M + 1), rounds=30, seed=seed), eta, [seed + 1])
        learner = agnostic_strong_restart(f, factory_for(f), M)
        tr = run_game(f, learner, adv, AgnosticStrong(eta), GameConfig(max_rounds=30))
        assert tr.clean
        worst = max(worst, tr.mistakes)
    assert learner.mistake_bound(eta) == 5
    assert worst <= 5


def test_restart_without_lies_never_restarts_needlessly():
    f = fam(2, 1, 3)
    learner = agnostic_strong_restart(f, factory_for(f), 1)
    tr = run_game(f, learner, hidden_function_adversary(f, 0, rounds=20), AgnosticStrong(0), GameConfig(max_rounds=20))
    assert tr.mistakes <= 1 and learner.restarts == 0


def test_ambiguous_with_r1_matches_bandit():
    f = fam(3, 2, 9)
    for hid in range(3):
        a = run_game(f, bandit_majority(f, factory_for(f), 2), hidden_function_adversary(f, hid, rounds=30, seed=hid),
                     Bandit(), GameConfig(max_rounds=30))
        b = run_game(f, ambiguous_majority(f, factory_for(f), 2, 1),
                     hidden_function_adversary(f, hid, rounds=30, seed=hid), DelayedAmbiguous(1),
                     GameConfig(max_rounds=30))
        assert [r.answers for r in a.records] == [r.answers for r in b.records]
        assert a.mistakes == b.mistakes


def test_ambiguous_op_bound_formula():
    f = fam(3, 2, 1)
    learner = ambiguous_majority(f, factory_for(f), 2, 2)
    assert learner.op_bound(1) == (2 * 2) ** 2 * (2 * 1 + 2 + 1)


def test_ambiguous_r2_respects_mistake_budget():
    k, M, r = 2, 1, 2
    f = fam(k, M, 4)
    for hid in range(M + 1):
        learner = ambiguous_majority(f, factory_for(f), M, r)
        tr = run_game(f, learner, hidden_function_adversary(f, hid, rounds=40, seed=hid), DelayedAmbiguous(r),
                      GameConfig(max_rounds=40))
        assert tr.clean
        assert all(q <= learner.decay_factor for q in learner.decay_ratios())


def test_order_reduction_with_identity_maps_matches_inner():
    f = LinearReal(3)
    rng = random.Random(4)
    member = f.random_member(rng)
    inputs = [f.random_input(rng) for _ in range(12)]
    direct = run_game(f, SpanLearner(f), hidden_function_adversary(f, member, inputs=list(inputs)), Standard(),
                      GameConfig())
    wrapped = run_game(f, order_reduction(f, SpanLearner(f)), hidden_function_adversary(f, member, inputs=list(inputs)),
                       Standard(), GameConfig())
    assert direct.mistakes == wrapped.mistakes <= 3
    assert [r.answers for r in direct.records] == [r.answers for r in wrapped.records]


def test_order_reduction_lifts_scalar_lines_into_plane():
    src = LinearReal(1)
    g = LinearReal(2)
    member = (F(3),)
    red = order_reduction(src, SpanLearner(g), to_g=lambda x, meter: (x[0], F(0)))
    tr = run_game(src, red, hidden_function_adversary(src, member, inputs=[(F(v),) for v in range(1, 6)]),
                  Standard(), GameConfig())
    assert tr.mistakes == 1
    assert red.op_bound(4) == 4


def test_combined_star_learner_two_n():
    for n in (1, 2, 3, 4):
        f = CombinedStar(3, n)
        learner = combined_star_learner(f)
        tr = run_game(f, learner, combined_star_adversary(f), Standard(), GameConfig())
        assert tr.mistakes == 2 * n == learner.mistake_bound
