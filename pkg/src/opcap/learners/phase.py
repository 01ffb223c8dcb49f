"""Two-phase wrapper that runs a learner with expensive updates under a small per-round cap."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import SealedMeter
from .base import Learner


class _Relay:
    """Meter stand-in handed to a suspended update; forwards charges to the
    meter of whichever round is currently resuming it."""

    def __init__(self):
        self.target = None

    @property
    def sealed(self):
        return self.target is None or self.target.sealed

    def charge(self):
        if self.target is None:
            raise SealedMeter("deferred update resumed outside a round")
        self.target.charge()


@dataclass(frozen=True)
class Certificate:
    t: int  # mistake bound of the base learner
    s: int  # max ops of one post-mistake update
    W: int  # per-round budget, at least one guess

    @property
    def mistake_bound(self) -> int:
        return self.t * (1 + math.ceil(self.s / self.W))


class PhaseWrapper(Learner):
    """Phase 1 answers with the base hypothesis. A mistake starts phase 2, which
    spends at most W ops per round on the deferred update, answers the family
    default and discards what it is told. Mistakes <= t (1 + ceil(s / W)).

    The base must expose ``guess``, ``learn``, ``update_steps`` and ``finish``.
    """

    def __init__(self, base, cert: Certificate):
        super().__init__(base.family)
        if cert.W < 1:
            raise ValueError("W must be positive")
        self.base, self.cert = base, cert
        self.phase = 1
        self._relay = _Relay()
        self._gen = None
        self._round_phase = 1
        self._spent = 0
        self.update_costs = []  # total ops of every completed update

    @property
    def W(self):
        return self.cert.W

    def answer(self, x, meter):
        self._relay.target = meter
        try:
            if self.phase == 2:
                start = meter.used
                while meter.used < self.W:
                    try:
                        next(self._gen)
                    except StopIteration as stop:
                        self.base.finish(stop.value)
                        self._spent += meter.used - start
                        self.update_costs.append(self._spent)
                        self._gen, self.phase = None, 1
                        break
                else:
                    self._spent += meter.used - start
                if self.phase == 2 or meter.used > 0:
                    self._round_phase = 2
                    return self.family.default
            self._round_phase = 1
            return self.base.guess(x, meter)
        finally:
            self._relay.target = None

    def observe(self, x, guess, feedback):
        if self._round_phase == 2:
            return  # phase-2 rounds are forgotten
        y = self.revealed(feedback)
        if y == guess:
            return
        self.base.learn(x, y)
        self._gen = self.base.update_steps(self._relay)
        self._spent = 0
        self.phase = 2


def phase_wrapper(base, t: int, s: int, W: int) -> PhaseWrapper:
    return PhaseWrapper(base, Certificate(t, s, W))

