"""Members are pairs of points {a, 1/a} mapped to 1, everything else to 0.

After seeing a, a learner that may multiply once can check whether the next
input is 1/a. With no arithmetic allowed it can only memorise, and pays a
second mistake. The tuple version needs r multiplications for the check.
"""
from opcap.adversaries import hidden_function_adversary
from opcap.engine import GameConfig, Standard, run_game
from opcap.families import ReciprocalTuple
from opcap.learners import ReciprocalCheck, ZeroDefaultMemorizer

for r in (1, 2, 3, 5):
    family = ReciprocalTuple(r)
    member = family.make_member(tuple(range(2, r + 2)))
    print(f"r={r}")
    for cap in range(r + 2):
        for learner in (ZeroDefaultMemorizer(family), ReciprocalCheck(family)):
            tr = run_game(family, learner, hidden_function_adversary(family, member, inputs=list(member)),
                          Standard(), GameConfig(cap=cap))
            print(f"  cap={cap} {type(learner).__name__:>20}: {tr.status:<12} mistakes={tr.mistakes}")
