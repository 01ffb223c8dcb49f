"""A learner for linear maps R^n -> R against an adversary that serves unit vectors.

The span learner answers 0 for anything outside the span of what it has seen,
so each unit vector costs one mistake and nothing after that does. The
adversary always claims the value the learner did not guess, which is why the
count is exactly n and not just at most n.
"""
from opcap.adversaries import basis_adversary
from opcap.engine import GameConfig, Standard, run_game
from opcap.families import LinearReal
from opcap.learners import SpanLearner

for n in range(1, 7):
    family = LinearReal(n)
    tr = run_game(family, SpanLearner(family), basis_adversary(family, tail=5, seed=n), Standard(), GameConfig())
    print(f"n={n}: {tr.rounds} rounds, {tr.mistakes} mistakes, peak {tr.max_ops} ops in a round, "
          f"witness ({', '.join(str(c) for c in tr.certification['witness'])})")
