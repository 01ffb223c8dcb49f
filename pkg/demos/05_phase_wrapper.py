"""Capping a row-reduction learner at the cost of a single guess.

The wrapper alternates between answering with its current hypothesis and
spreading the deferred update over several rounds. It may make more
mistakes, but never more than t(1 + ceil(s/W)).
"""
import math
import random
from fractions import Fraction

from opcap.adversaries import hidden_function_adversary
from opcap.engine import GameConfig, Standard, run_game
from opcap.families import LinearReal
from opcap.learners import SpanLearner, phase_wrapper

family = LinearReal(3)
probe = SpanLearner(family)
W, s, t = probe.guess_cost(), probe.update_bound(), probe.mistake_bound
print(f"guess cost W={W}, update cost s={s}, mistakes t={t}, bound {t * (1 + math.ceil(Fraction(s, W)))}")
for seed in range(5):
    member = family.random_member(random.Random(seed))
    plain = run_game(family, SpanLearner(family), hidden_function_adversary(family, member, rounds=40, seed=seed),
                     Standard(), GameConfig(max_rounds=40))
    wrapped = run_game(family, phase_wrapper(SpanLearner(family), t, s, W),
                       hidden_function_adversary(family, member, rounds=40, seed=seed), Standard(),
                       GameConfig(cap=W, max_rounds=40))
    print(f"seed {seed}: uncapped {plain.mistakes} mistakes peak {plain.max_ops} ops | "
          f"capped {wrapped.mistakes} mistakes peak {wrapped.max_ops} ops")
