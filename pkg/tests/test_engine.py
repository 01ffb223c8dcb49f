import json
import random
from fractions import Fraction as F

import pytest

from opcap.adversaries import Adversary, basis_adversary, hidden_function_adversary, lying_wrapper
from opcap.engine import (
    AgnosticStrong, Bandit, CartBandit, Case, DelayedAmbiguous, GameConfig, ReportRow, Standard, certify,
    compare, run_case, run_game, sweep,
)
from opcap.errors import AdversaryInconsistent, ValidationError
from opcap.families import LinearReal, ReciprocalTuple, SparseSupport, random_finite_family
from opcap.learners import ReciprocalCheck, SequentialElimination, SpanLearner, ZeroDefaultMemorizer
from opcap.learners.basic import ConstantLearner
from opcap.reductions import ambiguous_majority, bandit_majority
from opcap.values import Reveal, Verdict


def linear_game(seed, cap=None):
    f = LinearReal(3)
    rng = random.Random(seed)
    member = f.random_member(rng)
    return run_game(f, SpanLearner(f), hidden_function_adversary(f, member, rounds=15, seed=seed), Standard(),
                    GameConfig(cap=cap, max_rounds=15, seed=seed))


def test_same_seed_same_transcript():
    assert linear_game(3).to_json() == linear_game(3).to_json()
    assert linear_game(3).to_json() != linear_game(4).to_json()


def test_json_round_trips_through_parser():
    doc = json.loads(linear_game(1).to_json())
    assert doc["totals"]["rounds"] == 15
    assert doc["status"] == "clean"
    assert doc["certification"]["ok"] is True
    assert len(doc["records"]) == 15


def test_csv_has_header_and_one_row():
    lines = linear_game(2).to_csv().strip().splitlines()
    assert len(lines) == 2 and lines[0].startswith("family,")


def test_cap_soundness():
    uncapped = linear_game(5)
    top = uncapped.max_ops
    assert linear_game(5, cap=top).clean
    short = linear_game(5, cap=top - 1)
    assert short.status == "cap_exceeded"
    last = short.records[-1]
    assert last.mistake is False and last.ops > top - 1
    assert all(r.ops <= top - 1 for r in short.records[:-1])


def test_standard_feedback_reveals_and_bandit_hides():
    f = random_finite_family(random.Random(1), 2, 4, 3)
    tr = run_game(f, SequentialElimination(f), hidden_function_adversary(f, 0, rounds=5), Standard(),
                  GameConfig(max_rounds=5))
    assert all(isinstance(r.feedback, Reveal) for r in tr.records)
    tr = run_game(f, bandit_majority(f, lambda: SequentialElimination(f), 1),
                  hidden_function_adversary(f, 0, rounds=5), Bandit(), GameConfig(max_rounds=5))
    assert all(isinstance(r.feedback, Verdict) for r in tr.records)


def test_standard_learner_rejected_under_bandit_for_k_above_two():
    f = random_finite_family(random.Random(1), 2, 4, 3)
    with pytest.raises(ValidationError):
        run_game(f, SequentialElimination(f), hidden_function_adversary(f, 0, rounds=3), Bandit())


def test_binary_family_auto_adapts_under_bandit():
    f = random_finite_family(random.Random(2), 3, 5, 2)
    tr = run_game(f, SequentialElimination(f), hidden_function_adversary(f, 1, rounds=20, seed=1), Bandit(),
                  GameConfig(max_rounds=20))
    assert tr.clean and tr.mistakes <= 2


def test_delayed_and_cart_differ_only_in_delivery():
    f = random_finite_family(random.Random(6), 3, 6, 2)
    out = []
    for proto in (DelayedAmbiguous(2), CartBandit(2)):
        learner = ambiguous_majority(f, lambda: SequentialElimination(f), 2, 2)
        out.append(run_game(f, learner, hidden_function_adversary(f, 1, rounds=20, seed=4), proto,
                            GameConfig(max_rounds=10)))
    a, b = out
    assert [(r.inputs, r.answers, r.claims, r.mistake, r.ops) for r in a.records] == \
           [(r.inputs, r.answers, r.claims, r.mistake, r.ops) for r in b.records]
    assert {r.delivery for r in a.records} == {"sequential"}
    assert {r.delivery for r in b.records} == {"batch"}


class _TooManyNonzeros(Adversary):
    name = "fabricated"

    def __init__(self, family, count):
        super().__init__(family)
        self.left = list(range(1, count + 1))

    def next_input(self):
        return self.left.pop(0) if self.left else None

    def _claim(self, x, guess):
        return 1


def test_fabricated_sparse_transcript_fails_certification():
    f = SparseSupport(2, 2)
    with pytest.raises(AdversaryInconsistent):
        run_game(f, ZeroDefaultMemorizer(f), _TooManyNonzeros(f, 3), Standard(), GameConfig())
    tr = run_game(f, ZeroDefaultMemorizer(f), _TooManyNonzeros(f, 3), Standard(), GameConfig(), certify_game=False)
    res = certify(tr, f, 0)
    assert res["ok"] is False
    assert certify(tr, f, 1)["ok"] is True


def test_lying_transcript_certifies_within_eta():
    f = random_finite_family(random.Random(3), 3, 6, 3)
    adv = lying_wrapper(hidden_function_adversary(f, 2, rounds=12, seed=3), 1, [4])
    from opcap.reductions import agnostic_strong_restart
    tr = run_game(f, agnostic_strong_restart(f, lambda: SequentialElimination(f), 2), adv, AgnosticStrong(1),
                  GameConfig(max_rounds=12))
    assert tr.certification["ok"] and tr.certification["disagreements"] <= 1


def test_sweep_linear_dimensions():
    cases = []
    for n in range(1, 6):
        def build(n=n):
            f = LinearReal(n)
            return f, SpanLearner(f), basis_adversary(f), Standard(), GameConfig()
        cases.append(Case(f"n={n}", build, n, "=="))
    rows = sweep(cases)
    assert [r.mistakes for r in rows] == [1, 2, 3, 4, 5]
    assert all(r.verdict == "pass" for r in rows)
    assert [r.config_id for r in sweep(cases, workers=3)] == [c.id for c in cases]


def test_sweep_reciprocal_caps():
    f = ReciprocalTuple(3)
    member = f.make_member((2, 3, 4))
    a, b = member

    def build(cap):
        learner = ReciprocalCheck(f) if cap >= 3 else ZeroDefaultMemorizer(f)
        return f, learner, hidden_function_adversary(f, member, inputs=[a, b]), Standard(), GameConfig(cap=cap)

    rows = sweep([Case(f"cap={c}", lambda c=c: build(c)) for c in range(5)])
    assert [r.mistakes for r in rows] == [2, 2, 2, 1, 1]
    assert all(r.max_ops <= c for r, c in zip(rows, range(5)))


def test_empty_sweep():
    assert sweep([]) == []


def test_run_case_reports_errors_as_failures():
    def build():
        raise ValidationError("broken")
    row = run_case(Case("bad", build))
    assert row.verdict == "fail" and row.status == "error"


def test_expected_cap_exceeded_passes():
    f = ReciprocalTuple(3)
    member = f.make_member((2, 3, 4))
    row = run_case(Case("under", lambda: (f, ReciprocalCheck(f), hidden_function_adversary(
        f, member, inputs=list(member)), Standard(), GameConfig(cap=2)), expect_status="cap_exceeded"))
    assert row.verdict == "pass" and row.status == "cap_exceeded"


def test_compare_and_bound_display():
    assert compare(3, "<=", 3) and compare(3, "==", 3) and compare(4, ">=", 3)
    with pytest.raises(ValueError):
        compare(1, "<", 2)
    assert ReportRow("x", 1, F(7, 2), 0, None, "clean", "pass").bound_display() == "4 (7/2)"


def test_real_valued_error_tracked():
    f = LinearReal(1)
    tr = run_game(f, ConstantLearner(f, F(0)), hidden_function_adversary(f, (F(2),), inputs=[(F(1),), (F(-3),)]),
                  Standard(), GameConfig())
    assert tr.total_error == 8
