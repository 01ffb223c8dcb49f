"""Named verification suites: grids of games whose measured values are checked
against exact bounds. Each suite returns a list of ReportRow."""
from __future__ import annotations

import random
from fractions import Fraction

from . import dag
from .adversaries import (
    basis_adversary, bisection_indicator_adversary, combined_star_adversary, floor_parity_adversary,
    hidden_function_adversary, lying_wrapper, poly_power_adversary, reciprocal_inputs,
)
from .engine import (
    AgnosticStrong, AgnosticWeak, Bandit, Case, DelayedAmbiguous, GameConfig, ReportRow, Standard, sweep,
)
from .families import (
    BoundedDegreePoly, CombinedStar, FloorParity, LinearField, LinearReal, OneLayer, ReciprocalPair,
    ReciprocalTuple, SoftmaxLayer, TwoLayerReluIndicator, affine_mod_family, random_finite_family,
)
from .learners import (
    ConstantLearner, FixedHypothesis, RandomGuess, ReciprocalCheck, ReluLearner, SequentialElimination,
    SpanLearner, ZeroDefaultMemorizer, phase_wrapper,
)
from .reductions import (
    CombinedStarLearner, agnostic_strong_majority, agnostic_strong_restart, agnostic_weak_majority,
    ambiguous_majority, bandit_alpha, bandit_bound_holds, bandit_majority, largest_within, order_reduction,
    strong_bound_holds, weak_bound_holds,
)
from .values import Left

ACTIVATIONS = ("leaky_relu", "sigmoid", "tanh")


def _game(family, learner, adversary, protocol=None, cap=None, rounds=100, seed=0):
    return family, learner, adversary, protocol or Standard(), GameConfig(cap=cap, max_rounds=rounds, seed=seed)


# ------------------------------------------------------------------ exact bounds


def exact_bounds_cases() -> list:
    cases = []
    for n in range(1, 7):
        f = LinearReal(n)
        cases.append(Case(f"span linear_real n={n}", lambda f=f: _game(f, SpanLearner(f), basis_adversary(f, tail=3)),
                          n, "=="))
    for act in ACTIVATIONS:
        for n in range(1, 5):
            f = OneLayer(n, act, Fraction(1, 2))
            cases.append(Case(f"affine {act} n={n}", lambda f=f: _game(f, SpanLearner(f), basis_adversary(f, tail=3)),
                              n + 1, "=="))
    for n in range(1, 5):
        f = OneLayer(n, "relu")
        cases.append(Case(f"relu n={n}", lambda f=f: _game(f, ReluLearner(f), basis_adversary(f, tail=3)), n + 1, "=="))
    for k in (2, 3):
        for n in range(1, 5):
            f = SoftmaxLayer(n, k)
            cases.append(Case(f"softmax k={k} n={n}", lambda f=f: _game(f, SpanLearner(f), basis_adversary(f, tail=3)),
                              n + 1, "=="))
    for d in ((2,), (1, 1), (2, 1)):
        f = BoundedDegreePoly(d)
        cases.append(Case(f"poly d={d}", lambda f=f: _game(f, SpanLearner(f), poly_power_adversary(f, tail=3)),
                          f.dim, "=="))
    rng = random.Random(2024)
    for i in range(20):
        f = random_finite_family(rng, rng.randint(2, 8), 6, rng.choice((2, 3, 4)))
        hid = rng.randrange(len(f.table))
        cases.append(Case(f"sequential_elimination family#{i} |F|={len(f.table)}",
                          lambda f=f, hid=hid, i=i: _game(
                              f, SequentialElimination(f), hidden_function_adversary(f, hid, rounds=40, seed=i),
                              rounds=40),
                          len(f.table) - 1))
    for p, n in ((2, 2), (3, 2), (5, 3)):
        f = CombinedStar(p, n)
        cases.append(Case(f"combined_star p={p} n={n}",
                          lambda f=f: _game(f, CombinedStarLearner(f), combined_star_adversary(f, tail=20, seed=1)),
                          2 * n))
        lf = LinearField(p, n)
        cases.append(Case(f"order_reduction linear_field p={p} n={n}",
                          lambda f=f, lf=lf: _game(
                              lf, order_reduction(lf, CombinedStarLearner(f), to_g=lambda x, m: Left(x)),
                              basis_adversary(lf, tail=20, seed=2)),
                          2 * n))
    return cases


# ------------------------------------------------------------------ voting bounds


def _voting_family(k, M, seed):
    rng = random.Random(seed)
    return random_finite_family(rng, M + 1, 6, k)


def voting_bounds_cases() -> list:
    cases = []
    for k in (2, 4, 8):
        for M in (1, 2):
            for eta in (0, 1, 2):
                seed = 100 * k + 10 * M + eta
                f = _voting_family(k, M, seed)
                rng = random.Random(seed)
                hid, sched = rng.randrange(M + 1), sorted(rng.sample(range(1, 30), eta))
                strong = largest_within(lambda m: strong_bound_holds(m, M, eta, k))
                weak = largest_within(lambda m: weak_bound_holds(m, M, eta, k))

                def mk(kind, f=f, hid=hid, sched=sched, M=M, eta=eta, seed=seed):
                    base = lying_wrapper(hidden_function_adversary(f, hid, rounds=30, seed=seed), eta, sched,
                                         "weak" if kind == "weak" else "strong")
                    factory = lambda: SequentialElimination(f)  # noqa: E731
                    if kind == "strong":
                        return _game(f, agnostic_strong_majority(f, factory, M), base, AgnosticStrong(eta), rounds=30)
                    if kind == "weak":
                        return _game(f, agnostic_weak_majority(f, factory, M), base, AgnosticWeak(eta), rounds=30)
                    return _game(f, agnostic_strong_restart(f, factory, M), base, AgnosticStrong(eta), rounds=30)

                tag = f"k={k} M={M} eta={eta}"
                cases.append(Case(f"agnostic_strong_majority {tag}", lambda mk=mk: mk("strong"), strong))
                cases.append(Case(f"agnostic_weak_majority {tag}", lambda mk=mk: mk("weak"), weak))
                cases.append(Case(f"agnostic_strong_restart {tag}", lambda mk=mk: mk("restart"),
                                  (M + 1) * (eta + 1) - 1))
    for k in (2, 3, 4):
        for M in (1, 2):
            f = _voting_family(k, M, 7 * k + M)
            # total weight shrinks by the tight factor per mistake and never drops below alpha^M
            alpha = bandit_alpha(k)
            tight = 1 - (1 - (k - 1) * alpha) / k
            bound = largest_within(lambda m, M=M: bandit_bound_holds(m, M, alpha, tight))
            for hid in range(M + 1):
                cases.append(Case(f"bandit_majority k={k} M={M} hidden={hid}",
                                  lambda f=f, hid=hid, M=M: _game(
                                      f, bandit_majority(f, lambda: SequentialElimination(f), M),
                                      hidden_function_adversary(f, hid, rounds=30, seed=hid), Bandit(), rounds=30),
                                  bound, note="decay audited in the acceptance tests"))
    return cases


# ------------------------------------------------------------------ op caps


AFFINE_MOD_COEFFS = ((1, 0), (1, 1), (0, 1))
AFFINE_MOD_OPS = 5


def op_caps_cases() -> list:
    cases = []
    pair = ReciprocalPair()
    pair_member = pair.make_member((2,))
    pair_inputs = list(pair.scalar_points(pair_member))
    for cap in range(3):
        learner = ZeroDefaultMemorizer if cap == 0 else ReciprocalCheck
        cases.append(Case(f"reciprocal_pair cap={cap} {learner.__name__}",
                          lambda learner=learner, cap=cap: _game(pair, learner(pair), hidden_function_adversary(
                              pair, pair_member, inputs=pair_inputs), cap=cap),
                          2 if cap == 0 else 1, "=="))
    for r in (2, 3, 5):
        f = ReciprocalTuple(r)
        mem = f.make_member(tuple(range(2, r + 2)))
        inputs = reciprocal_inputs(f, mem)
        for cap in range(r + 2):
            if cap < r:
                cases.append(Case(f"reciprocal_tuple r={r} cap={cap} memorizer",
                                  lambda f=f, mem=mem, inputs=inputs, cap=cap: _game(
                                      f, ZeroDefaultMemorizer(f), hidden_function_adversary(f, mem, inputs=inputs),
                                      cap=cap),
                                  2, "=="))
                cases.append(Case(f"reciprocal_tuple r={r} cap={cap} reciprocal_check",
                                  lambda f=f, mem=mem, inputs=inputs, cap=cap: _game(
                                      f, ReciprocalCheck(f), hidden_function_adversary(f, mem, inputs=inputs), cap=cap),
                                  None, expect_status="cap_exceeded", note="disqualified below r ops"))
            else:
                cases.append(Case(f"reciprocal_tuple r={r} cap={cap} reciprocal_check",
                                  lambda f=f, mem=mem, inputs=inputs, cap=cap: _game(
                                      f, ReciprocalCheck(f), hidden_function_adversary(f, mem, inputs=inputs), cap=cap),
                                  1, "=="))
    f3 = LinearReal(3)
    probe = SpanLearner(f3)
    W, s, t = probe.guess_cost(), probe.update_bound(), probe.mistake_bound
    bound = t * (1 + -(-s // W))
    for seed in range(5):
        member = f3.random_member(random.Random(seed))
        cases.append(Case(f"phase_wrapper linear_real n=3 W={W} seed={seed}",
                          lambda member=member, seed=seed: _game(
                              f3, phase_wrapper(SpanLearner(f3), t, s, W),
                              hidden_function_adversary(f3, member, rounds=60, seed=seed), cap=W, rounds=60),
                          bound))
    for k in (2, 3):
        for M in (1, 2):
            f = affine_mod_family(k, AFFINE_MOD_COEFFS[: M + 1], domain=range(6))
            factory = lambda f=f: SequentialElimination(f)  # noqa: E731
            cap = (k - 1) ** M * (AFFINE_MOD_OPS + 2)
            for hid in range(M + 1):
                cases.append(Case(f"bandit_majority ops k={k} M={M} a={AFFINE_MOD_OPS} hidden={hid}",
                                  lambda f=f, factory=factory, M=M, cap=cap, hid=hid: _game(
                                      f, bandit_majority(f, factory, M),
                                      hidden_function_adversary(f, hid, rounds=30, seed=hid), Bandit(), cap=cap,
                                      rounds=30),
                                  M, note=f"cap = (k-1)^M (a+2) = {cap}"))
                for r in (1, 2):
                    cap_r = (r * (k - 1)) ** M * (r * AFFINE_MOD_OPS + r + 1)
                    cases.append(Case(f"ambiguous_majority ops k={k} M={M} r={r} hidden={hid}",
                                      lambda f=f, factory=factory, M=M, r=r, cap_r=cap_r, hid=hid: _game(
                                          f, ambiguous_majority(f, factory, M, r),
                                          hidden_function_adversary(f, hid, rounds=40, seed=hid), DelayedAmbiguous(r),
                                          cap=cap_r, rounds=20),
                                      None, note=f"cap = (r(k-1))^M (ra+r+1) = {cap_r}"))
            for eta in (0, 1):
                cases.append(Case(f"agnostic_strong_restart ops k={k} M={M} eta={eta}",
                                  lambda f=f, factory=factory, M=M, eta=eta: _game(
                                      f, agnostic_strong_restart(f, factory, M),
                                      lying_wrapper(hidden_function_adversary(f, M, rounds=30), eta, [2][:eta]),
                                      AgnosticStrong(eta), cap=AFFINE_MOD_OPS, rounds=30),
                                  (M + 1) * (eta + 1) - 1, note="cap = base learner's a"))
    return cases


# ------------------------------------------------------------------ impossibility


def _floor_learners(f):
    return {
        "constant0": lambda: ConstantLearner(f, 0),
        "random": lambda: RandomGuess(f, [0, 1], seed=5),
        "fixed x=1/3": lambda: FixedHypothesis(f, Fraction(1, 3)),
    }


def _bisection_learners(f):
    return {
        "constant1/2": lambda: ConstantLearner(f, Fraction(1, 2)),
        "constant0": lambda: ConstantLearner(f, Fraction(0)),
        "random": lambda: RandomGuess(f, [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1)], seed=3),
    }


def impossibility_cases() -> list:
    cases = []
    fp = FloorParity()
    for name, make in _floor_learners(fp).items():
        cases.append(Case(f"floor_parity 30 rounds vs {name}",
                          lambda make=make: _game(fp, make(), floor_parity_adversary(fp), rounds=30),
                          30, ">=", check=lambda tr: tr.certification["ok"]))
    for alpha in (Fraction(0), Fraction(1, 2)):
        f = TwoLayerReluIndicator(alpha)
        for name, make in _bisection_learners(f).items():
            cases.append(Case(f"bisection alpha={alpha} 20 rounds vs {name}",
                              lambda f=f, make=make: _game(f, make(), bisection_indicator_adversary(f), rounds=20),
                              20, ">=", check=lambda tr: tr.total_error >= 10 and tr.certification["ok"],
                              note="cumulative error >= 10"))
    return cases


# ------------------------------------------------------------------ dag dependency


def dag_dependency_rows(count: int = 1000, seed: int = 0) -> list:
    rng = random.Random(seed)
    violations = 0
    for i in range(count):
        report = dag.analyze(dag.random_dag(rng, 6, 20), probes=60, seed=i)
        violations += report.verdict != "pass"
    rows = [ReportRow(f"random dags x{count} (arity<=6, nodes<=20)", violations, 0, 0, None, "clean",
                      "pass" if violations == 0 else "fail", "measured = violations", "==")]
    for m in range(2, 7):
        report = dag.analyze(dag.sum_dag(m))
        ok = report.static_binary == report.bound == m - 1 and report.verdict == "pass"
        rows.append(ReportRow(f"sum of {m} inputs", report.static_binary, m - 1, report.static_binary, None, "clean",
                              "pass" if ok else "fail", report.summary(), "=="))
    return rows


SUITES = {
    "exact-bounds": exact_bounds_cases,
    "voting-bounds": voting_bounds_cases,
    "op-caps": op_caps_cases,
    "impossibility": impossibility_cases,
    "dag-lemma": None,
}


def run_suite(name: str, workers: int = 1, seed: int = 0) -> list:
    if name not in SUITES:
        raise KeyError(name)
    if name == "dag-lemma":
        return dag_dependency_rows(seed=seed)
    return sweep(SUITES[name](), workers)
