"""Two families where every learner keeps erring, with exact witnesses.

Floor parity: input 2^j reads the j-th binary digit of the hidden x, and the
adversary picks each digit after seeing the guess. Indicator networks: the
adversary bisects [0, 1] and a four-neuron network fits every claim.
"""
from fractions import Fraction

from opcap.adversaries import bisection_indicator_adversary, floor_parity_adversary
from opcap.engine import GameConfig, Standard, run_game
from opcap.families import FloorParity, TwoLayerReluIndicator
from opcap.learners.basic import ConstantLearner, RandomGuess

fp = FloorParity()
adv = floor_parity_adversary(fp)
tr = run_game(fp, RandomGuess(fp, [0, 1], seed=0), adv, Standard(), GameConfig(max_rounds=30))
print(f"floor parity: {tr.mistakes}/30 mistakes, digits {''.join(map(str, adv.bits()))}")
print(f"  witness x = {tr.certification['witness']}")

for alpha in (Fraction(0), Fraction(1, 2)):
    family = TwoLayerReluIndicator(alpha)
    adv = bisection_indicator_adversary(family)
    tr = run_game(family, ConstantLearner(family, Fraction(1, 2)), adv, Standard(), GameConfig(max_rounds=20))
    net = tr.certification["witness"]
    print(f"indicator alpha={alpha}: total error {tr.total_error} over 20 rounds; "
          f"witness c={net.c} eps={net.eps}")
