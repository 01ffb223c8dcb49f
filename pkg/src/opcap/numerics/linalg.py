"""Exact row reduction with per-operation accounting.

The elimination routines are generators that yield after every charged
operation, so a caller can suspend a long reduction when its round budget runs
out and resume it in a later round. ``drain`` runs one to completion.
Pivoting picks the first nonzero entry; multiplications by a zero entry are
skipped (that decision is a free comparison).
"""
from __future__ import annotations

from typing import NamedTuple

from .fields import QQ
from .meter import FREE, OpMeter


def drain(gen):
    """Run a step generator to completion and return its result."""
    try:
        while True:
            next(gen)
    except StopIteration as stop:
        return stop.value


def rref_steps(m, field, meter: OpMeter, pivot_limit: int | None = None):
    """Reduce ``m`` (list of row lists) in place to reduced row echelon form.

    Only the first ``pivot_limit`` columns are eligible as pivots. Returns the
    list of pivot columns.
    """
    rows = len(m)
    if rows == 0:
        return []
    cols = len(m[0])
    limit = cols if pivot_limit is None else pivot_limit
    pivots = []
    pr = 0
    for col in range(limit):
        if pr == rows:
            break
        r = next((i for i in range(pr, rows) if m[i][col] != 0), None)
        if r is None:
            continue
        m[pr], m[r] = m[r], m[pr]
        pivot_row = m[pr]
        pv = pivot_row[col]
        if pv != field.one:
            for c in range(col + 1, cols):
                if pivot_row[c] != 0:
                    pivot_row[c] = field.div(pivot_row[c], pv, meter)
                    yield
            pivot_row[col] = field.one
        for i in range(rows):
            if i == pr:
                continue
            row = m[i]
            f = row[col]
            if f == 0:
                continue
            for c in range(col + 1, cols):
                if pivot_row[c] != 0:
                    t = field.mul(f, pivot_row[c], meter)
                    yield
                    row[c] = field.sub(row[c], t, meter)
                    yield
            row[col] = field.zero
        pivots.append(col)
        pr += 1
    return pivots


def rref_op_bound(rows: int, cols: int, pivot_limit: int | None = None) -> int:
    """Worst-case number of operations ``rref_steps`` charges on a rows x cols matrix."""
    limit = cols if pivot_limit is None else pivot_limit
    return sum((2 * rows - 1) * (cols - 1 - j) for j in range(min(rows, limit)))


class Solution(NamedTuple):
    particular: list  # n rows of q values; free variables set to zero
    pivots: list
    reduced: list  # the reduced augmented matrix


def solve_steps(a_rows, b_rows, field, meter: OpMeter, n: int | None = None):
    """Solve A X = B for X (A is m x n, B is m x q). Returns None if inconsistent."""
    if n is None:
        n = len(a_rows[0]) if a_rows else 0
    aug = [list(a) + list(b) for a, b in zip(a_rows, b_rows)]
    pivots = yield from rref_steps(aug, field, meter, pivot_limit=n)
    q = len(b_rows[0]) if b_rows else 1
    for row in aug[len(pivots):]:
        if any(v != 0 for v in row[n:]):
            return None
    x = [[field.zero] * q for _ in range(n)]
    for i, c in enumerate(pivots):
        x[c] = list(aug[i][n:])
    return Solution(x, pivots, aug)


def span_coeffs_steps(basis, x, field, meter: OpMeter):
    """Coefficients c with sum_j c_j basis[j] == x, or None if x is outside the span."""
    if not basis:
        return [] if all(v == 0 for v in x) else None
    dim = len(x)
    a_rows = [[vec[i] for vec in basis] for i in range(dim)]
    sol = yield from solve_steps(a_rows, [[v] for v in x], field, meter)
    if sol is None:
        return None
    return [row[0] for row in sol.particular]


def span_op_bound(k: int, dim: int) -> int:
    """Worst case of ``span_coeffs_steps`` with k basis vectors in dimension dim."""
    return rref_op_bound(dim, k + 1, k)


def nullspace(reduced, pivots, n, field):
    """Basis of {w : A w = 0} read off a reduced matrix whose first n columns are A."""
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        vec = [field.zero] * n
        vec[f] = field.one
        for i, c in enumerate(pivots):
            vec[c] = field.neg(reduced[i][f])
        basis.append(vec)
    return basis


def dot(u, v, field, meter: OpMeter):
    """Inner product charging exactly 2n - 1 operations (n >= 1)."""
    acc = field.mul(u[0], v[0], meter)
    for a, b in zip(u[1:], v[1:]):
        acc = field.add(acc, field.mul(a, b, meter), meter)
    return acc


def rref(m, field=QQ, meter: OpMeter = FREE, pivot_limit=None):
    return drain(rref_steps(m, field, meter, pivot_limit))


def solve(a_rows, b_rows, field=QQ, meter: OpMeter = FREE, n=None):
    return drain(solve_steps(a_rows, b_rows, field, meter, n))


def span_coeffs(basis, x, field=QQ, meter: OpMeter = FREE):
    return drain(span_coeffs_steps(basis, x, field, meter))


def rank(vectors, field=QQ) -> int:
    if not vectors:
        return 0
    return len(rref([list(v) for v in vectors], field))
