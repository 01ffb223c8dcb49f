"""Exact Fourier-Motzkin elimination for systems of non-strict inequalities.

Exponential in the worst case; the systems met here have a handful of
variables and a few dozen rows.
"""
from __future__ import annotations

from fractions import Fraction

from ..errors import UnsupportedConstraintPattern

MAX_ROWS = 50_000


def _normalize(rows):
    """Scale rows so the first nonzero coefficient has magnitude 1; keep the
    tightest rhs among parallel rows. Returns None on a trivially false row."""
    best = {}
    for coeffs, rhs in rows:
        lead = next((c for c in coeffs if c != 0), None)
        if lead is None:
            if rhs < 0:
                return None
            continue
        s = abs(lead)
        key = tuple(c / s for c in coeffs)
        r = rhs / s
        if key not in best or r < best[key]:
            best[key] = r
    return [(list(k), r) for k, r in best.items()]


def _eliminate(rows, var):
    pos, neg, rest = [], [], []
    for row in rows:
        c = row[0][var]
        (pos if c > 0 else neg if c < 0 else rest).append(row)
    out = list(rest)
    for pc, pr in pos:
        for nc, nr in neg:
            a, b = -nc[var], pc[var]
            coeffs = [a * x + b * y for x, y in zip(pc, nc)]
            coeffs[var] = Fraction(0)
            out.append((coeffs, a * pr + b * nr))
    if len(out) > MAX_ROWS:
        raise UnsupportedConstraintPattern("Fourier-Motzkin system grew too large")
    return out


def feasible_point(rows, nvars):
    """Return a rational point t with coeffs . t <= rhs for every row, or None.

    ``rows`` is a list of ``(coeffs, rhs)`` with ``len(coeffs) == nvars``.
    """
    rows = [([Fraction(c) for c in coeffs], Fraction(rhs)) for coeffs, rhs in rows]
    current = _normalize(rows)
    if current is None:
        return None
    stages = []
    for var in reversed(range(nvars)):
        stages.append((var, current))
        current = _normalize(_eliminate(current, var))
        if current is None:
            return None
    point = [Fraction(0)] * nvars
    for var, system in reversed(stages):
        lo, hi = None, None
        for coeffs, rhs in system:
            c = coeffs[var]
            if c == 0:
                continue
            rest = rhs - sum(coeffs[j] * point[j] for j in range(var))
            bound = rest / c
            if c > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        if lo is not None and hi is not None and lo > hi:
            return None  # cannot happen for a correct elimination
        if (lo is None or lo <= 0) and (hi is None or hi >= 0):
            point[var] = Fraction(0)
        else:
            point[var] = lo if lo is not None else hi
    return point
