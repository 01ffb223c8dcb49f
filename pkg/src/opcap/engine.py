"""Game runner: protocol dispatch, per-round op caps, transcripts and certification."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import (
    AdversaryInconsistent, CapExceeded, ExhaustedFamily, NoActiveCopies, OpcapError, ValidationError,
)
from .families import within_budget
from .learners.base import BinaryBanditAdapter, Learner
from .numerics import OpMeter
from .values import Equals, Reveal, Verdict, encode, values_equal

PROTOCOLS = ("standard", "bandit", "agnostic_strong", "agnostic_weak", "delayed_ambiguous", "cart_bandit")
STATUS_CLEAN = "clean"


@dataclass(frozen=True)
class Protocol:
    kind: str = "standard"
    eta: int = 0
    r: int = 1

    def __post_init__(self):
        if self.kind not in PROTOCOLS:
            raise ValidationError(f"unknown protocol {self.kind!r}")
        if self.eta < 0:
            raise ValidationError("eta must be nonnegative")
        if self.r < 1:
            raise ValidationError("r must be at least 1")

    @property
    def reveals(self) -> bool:
        """True when feedback carries the (claimed) output, False for yes/no feedback."""
        return self.kind in ("standard", "agnostic_strong")

    @property
    def batched(self) -> bool:
        return self.kind in ("delayed_ambiguous", "cart_bandit")

    def label(self) -> str:
        if self.kind.startswith("agnostic"):
            return f"{self.kind}(eta={self.eta})"
        if self.batched:
            return f"{self.kind}(r={self.r})"
        return self.kind


def Standard():
    return Protocol("standard")


def Bandit():
    return Protocol("bandit")


def AgnosticStrong(eta: int):
    return Protocol("agnostic_strong", eta=eta)


def AgnosticWeak(eta: int):
    return Protocol("agnostic_weak", eta=eta)


def DelayedAmbiguous(r: int):
    return Protocol("delayed_ambiguous", r=r)


def CartBandit(r: int):
    return Protocol("cart_bandit", r=r)


@dataclass(frozen=True)
class GameConfig:
    cap: int | None = None
    max_rounds: int = 100
    seed: int = 0
    mode: str = "exact"
    tol: float = 1e-9

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValidationError("max_rounds must be at least 1")
        if self.cap is not None and self.cap < 0:
            raise ValidationError("cap must be nonnegative")
        if self.mode not in ("exact", "approx"):
            raise ValidationError("mode must be 'exact' or 'approx'")

    @property
    def rel(self):
        return self.tol if self.mode == "approx" else None


@dataclass
class RoundRecord:
    index: int
    inputs: tuple
    answers: tuple
    claims: tuple
    feedback: object
    mistake: bool
    ops: int
    error: object = None
    delivery: str = "single"

    def to_dict(self):
        return {
            "round": self.index, "inputs": encode(list(self.inputs)), "answers": encode(list(self.answers)),
            "claims": encode(list(self.claims)), "feedback": encode(self.feedback), "mistake": self.mistake,
            "ops": self.ops, "error": encode(self.error), "delivery": self.delivery,
        }


@dataclass
class Transcript:
    family: str
    learner: str
    adversary: str
    protocol: Protocol
    config: GameConfig
    records: list = field(default_factory=list)
    status: str = STATUS_CLEAN
    reason: str = ""
    certification: dict | None = None

    @property
    def mistakes(self) -> int:
        return sum(r.mistake for r in self.records)

    @property
    def rounds(self) -> int:
        return len(self.records)

    @property
    def max_ops(self) -> int:
        return max((r.ops for r in self.records), default=0)

    @property
    def total_ops(self) -> int:
        return sum(r.ops for r in self.records)

    @property
    def total_error(self):
        errs = [r.error for r in self.records if r.error is not None]
        return sum(errs, Fraction(0)) if errs else None

    @property
    def clean(self) -> bool:
        return self.status == STATUS_CLEAN

    def constraints(self) -> list:
        return [Equals(x, y) for r in self.records for x, y in zip(r.inputs, r.claims)]

    def summary(self) -> str:
        return f"mistakes={self.mistakes} max_ops={self.max_ops} status={self.status}"

    def summary_row(self) -> dict:
        cert = self.certification or {}
        err = self.total_error
        return {
            "family": self.family, "learner": self.learner, "adversary": self.adversary,
            "protocol": self.protocol.label(), "cap": "" if self.config.cap is None else self.config.cap,
            "seed": self.config.seed, "rounds": self.rounds, "mistakes": self.mistakes,
            "max_ops": self.max_ops, "total_ops": self.total_ops,
            "total_error": "" if err is None else str(err), "status": self.status,
            "certified": cert.get("ok", ""), "disagreements": cert.get("disagreements", ""),
        }

    def to_dict(self) -> dict:
        return {
            "family": self.family, "learner": self.learner, "adversary": self.adversary,
            "protocol": {"kind": self.protocol.kind, "eta": self.protocol.eta, "r": self.protocol.r},
            "config": {"cap": self.config.cap, "max_rounds": self.config.max_rounds, "seed": self.config.seed,
                       "mode": self.config.mode, "tol": self.config.tol},
            "status": self.status, "reason": self.reason,
            "totals": {"rounds": self.rounds, "mistakes": self.mistakes, "max_ops": self.max_ops,
                       "total_ops": self.total_ops, "total_error": encode(self.total_error)},
            "certification": encode(self.certification),
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        return rows_to_csv([self.summary_row()])


def rows_to_csv(rows: list) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _error(guess, claim):
    num = (int, Fraction)
    if isinstance(guess, bool) or isinstance(claim, bool):
        return None
    if isinstance(guess, num) and isinstance(claim, num):
        return abs(Fraction(guess) - Fraction(claim))
    if isinstance(guess, (int, float, Fraction)) and isinstance(claim, (int, float, Fraction)):
        return abs(float(guess) - float(claim))
    return None


def _name(obj) -> str:
    return getattr(obj, "name", None) or type(obj).__name__


def _prepare(family, learner: Learner, protocol: Protocol) -> Learner:
    if protocol.reveals or learner.feedback == "bandit":
        return learner
    if family.k == 2:
        return BinaryBanditAdapter(learner)
    raise ValidationError(f"{type(learner).__name__} needs the true output; "
                          f"protocol {protocol.kind} only says right or wrong")


def run_game(family, learner: Learner, adversary, protocol: Protocol | None = None,
             config: GameConfig | None = None, certify_game: bool = True) -> Transcript:
    """Play one game; errors raised by the learner end it with a status instead of propagating."""
    protocol = protocol or Standard()
    config = config or GameConfig()
    real_valued = family.k is None
    player = _prepare(family, learner, protocol)
    tr = Transcript(_name(family), type(learner).__name__, _name(adversary), protocol, config)
    meter = OpMeter(config.cap)
    rel = config.rel
    for t in range(1, config.max_rounds + 1):
        meter.reset()
        try:
            if protocol.batched:
                xs = adversary.next_batch(protocol.r)
                if xs is None:
                    break
                if protocol.kind == "cart_bandit":
                    guesses = tuple(player.answer_batch(xs, meter))
                else:
                    guesses = tuple(player.answer(x, meter) for x in xs)
            else:
                x = adversary.next_input()
                if x is None:
                    break
                xs = (x,)
                guesses = (player.answer(x, meter),)
        except CapExceeded as exc:
            tr.records.append(RoundRecord(t, tuple(xs), (), (), None, False, exc.attempted))
            tr.status, tr.reason = "cap_exceeded", str(exc)
            break
        except ExhaustedFamily as exc:
            tr.status, tr.reason = "exhausted", str(exc)
            break
        except NoActiveCopies as exc:
            tr.status, tr.reason = "no_copies", str(exc)
            break
        meter.seal()
        ops = meter.used
        claims = tuple(adversary.respond_batch(xs, guesses)) if len(xs) > 1 else (adversary.respond(xs[0], guesses[0]),)
        wrong = [not values_equal(g, y, rel) for g, y in zip(guesses, claims)]
        mistake = any(wrong)
        if protocol.reveals:
            feedback = Reveal(claims[0])
        else:
            feedback = Verdict(not mistake)
        error = None
        if real_valued and len(xs) == 1:
            error = _error(guesses[0], claims[0])
        delivery = {"delayed_ambiguous": "sequential", "cart_bandit": "batch"}.get(protocol.kind, "single")
        tr.records.append(RoundRecord(t, tuple(xs), guesses, claims, feedback, mistake, ops, error, delivery))
        try:
            if protocol.batched:
                player.observe_batch(xs, guesses, feedback)
            else:
                player.observe(xs[0], guesses[0], feedback)
        except ExhaustedFamily as exc:
            tr.status, tr.reason = "exhausted", str(exc)
            break
        except NoActiveCopies as exc:
            tr.status, tr.reason = "no_copies", str(exc)
            break
    if certify_game:
        certify(tr, family, protocol.eta, strict=True)
    return tr


def certify(transcript: Transcript, family, eta: int = 0, strict: bool = False) -> dict:
    """Find a family member within ``eta`` disagreements of every claimed output."""
    constraints = transcript.constraints()
    res, dropped = within_budget(family, constraints, eta)
    result = {"ok": bool(res.ok), "eta": eta, "witness": res.witness if res.ok else None,
              "disagreements": None if dropped is None else len(dropped),
              "claims": len(constraints)}
    transcript.certification = result
    if strict and not res.ok:
        raise AdversaryInconsistent(f"no member of {family.name} is within {eta} disagreements of the claims")
    return result


# ------------------------------------------------------------------ sweeps


@dataclass(frozen=True)
class Case:
    """One row of a sweep. ``build`` returns (family, learner, adversary, protocol, config)."""

    id: str
    build: Callable
    bound: object = None          # int, Fraction or callable(transcript) -> bound
    relation: str = "<="          # how measured mistakes must compare with the bound
    expect_status: str = STATUS_CLEAN
    check: Callable | None = None  # extra predicate on the transcript
    note: str = ""


@dataclass
class ReportRow:
    """``mistakes`` is the measured quantity compared with ``bound`` via ``relation``."""

    config_id: str
    mistakes: int
    bound: object
    max_ops: int
    cap: int | None
    status: str
    verdict: str
    note: str = ""
    relation: str = "<="

    def bound_display(self) -> str:
        if self.bound is None:
            return ""
        if isinstance(self.bound, Fraction) and self.bound.denominator != 1:
            return f"{math.ceil(self.bound)} ({self.bound})"
        return str(self.bound)

    def to_dict(self) -> dict:
        return {"config_id": self.config_id, "mistakes": self.mistakes, "relation": self.relation,
                "bound": self.bound_display(), "max_ops": self.max_ops, "cap": "" if self.cap is None else self.cap,
                "status": self.status, "verdict": self.verdict, "note": self.note}


def compare(measured, relation: str, bound) -> bool:
    if relation == "<=":
        return measured <= bound
    if relation == "==":
        return measured == bound
    if relation == ">=":
        return measured >= bound
    raise ValueError(f"unknown relation {relation!r}")


def run_case(case: Case) -> ReportRow:
    try:
        family, learner, adversary, protocol, config = case.build()
        tr = run_game(family, learner, adversary, protocol, config)
    except OpcapError as exc:
        return ReportRow(case.id, -1, None, 0, None, "error", "fail", f"{type(exc).__name__}: {exc}")
    bound = case.bound(tr) if callable(case.bound) else case.bound
    ok = tr.status == case.expect_status
    if bound is not None and tr.status == STATUS_CLEAN:
        ok = ok and compare(tr.mistakes, case.relation, bound)
    if config.cap is not None and tr.status == STATUS_CLEAN:
        ok = ok and tr.max_ops <= config.cap
    if case.check is not None:
        ok = ok and bool(case.check(tr))
    return ReportRow(case.id, tr.mistakes, bound, tr.max_ops, config.cap, tr.status,
                     "pass" if ok else "fail", case.note, case.relation)


def sweep(cases, workers: int = 1) -> list:
    """Run every case; rows come back in input order."""
    cases = list(cases)
    if workers > 1 and len(cases) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_case, cases))
    return [run_case(c) for c in cases]
