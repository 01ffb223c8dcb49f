"""Arithmetic circuits: the per-round computation model of a capped learner.

Text format, one node per line (``;`` also separates lines, ``#`` starts a
comment)::

    arity 2                      # optional; defaults to max input index + 1
    i0                           # input node
    c 3/4                        # constant
    u floor 1                    # unary op on node 1
    p 2 (-inf,0]:const=0 (0,inf]:identity
    b mul 0 1                    # binary op, charged
    out 4

Node ids are line positions. Piecewise intervals are ``(lo, hi]`` and must
partition the real line; a piece is a unary kind, ``const=v``, or one of
``addc/subc/mulc/divc=v`` (a binary op against a constant, which is free).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import DivisionByZero, DomainError, InexactUnary, ParseError, ValidationError
from .numerics.meter import BINARY_KINDS, CONST_KINDS, FREE, OpMeter, binary_op, unary_op

PIECE_KINDS = ("identity", "floor", "ceil", "abs", "sqrt", "exp", "ln", "const") + CONST_KINDS
INF = None  # open end of a piecewise interval


@dataclass(frozen=True)
class Input:
    index: int


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Unary:
    kind: str
    src: int


@dataclass(frozen=True)
class Piece:
    lo: Fraction | None  # None = -inf
    hi: Fraction | None  # None = +inf
    kind: str
    c: Fraction | None = None

    def contains(self, v) -> bool:
        return (self.lo is None or v > self.lo) and (self.hi is None or v <= self.hi)


@dataclass(frozen=True)
class Piecewise:
    src: int
    pieces: tuple


@dataclass(frozen=True)
class Binary:
    kind: str
    a: int
    b: int


Node = Union[Input, Const, Unary, Piecewise, Binary]


def _preds(node) -> tuple:
    if isinstance(node, (Unary, Piecewise)):
        return (node.src,)
    if isinstance(node, Binary):
        return (node.a, node.b)
    return ()


@dataclass(frozen=True)
class DagProgram:
    nodes: tuple
    outputs: tuple
    arity: int

    def __post_init__(self):
        validate(self)

    @property
    def binary_count(self) -> int:
        return sum(isinstance(n, Binary) for n in self.nodes)

    def __call__(self, *inputs, meter: OpMeter = FREE):
        out = evaluate(self, list(inputs), meter)
        return out[0] if len(out) == 1 else tuple(out)


def validate(dag: DagProgram) -> None:
    seen_inputs = set()
    for i, node in enumerate(dag.nodes):
        for p in _preds(node):
            if not 0 <= p < i:
                raise ValidationError(f"node {i} references node {p}: edges must point to earlier nodes")
        if isinstance(node, Input):
            if not 0 <= node.index < dag.arity:
                raise ValidationError(f"node {i}: input index {node.index} outside arity {dag.arity}")
            if node.index in seen_inputs:
                raise ValidationError(f"node {i}: duplicate input i{node.index}")
            seen_inputs.add(node.index)
        elif isinstance(node, Unary):
            if node.kind not in PIECE_KINDS or node.kind == "const" or node.kind in CONST_KINDS:
                raise ValidationError(f"node {i}: bad unary kind {node.kind!r}")
        elif isinstance(node, Binary):
            if node.kind not in BINARY_KINDS:
                raise ValidationError(f"node {i}: bad binary kind {node.kind!r}")
        elif isinstance(node, Piecewise):
            _check_partition(i, node.pieces)
        elif not isinstance(node, Const):
            raise ValidationError(f"node {i}: unknown node type {type(node).__name__}")
    if not dag.outputs:
        raise ValidationError("program has no outputs")
    for o in dag.outputs:
        if not 0 <= o < len(dag.nodes):
            raise ValidationError(f"output {o} is not a node id")


def _check_partition(i, pieces):
    if not pieces:
        raise ValidationError(f"node {i}: piecewise node without pieces")
    if pieces[0].lo is not None:
        raise ValidationError(f"node {i}: piecewise intervals do not cover -inf")
    if pieces[-1].hi is not None:
        raise ValidationError(f"node {i}: piecewise intervals do not cover +inf")
    for prev, nxt in zip(pieces, pieces[1:]):
        if prev.hi is None or nxt.lo is None or prev.hi != nxt.lo:
            raise ValidationError(f"node {i}: piecewise intervals overlap or leave a gap")
    for p in pieces:
        if p.lo is not None and p.hi is not None and p.lo >= p.hi:
            raise ValidationError(f"node {i}: empty interval ({p.lo},{p.hi}]")
        if p.kind not in PIECE_KINDS:
            raise ValidationError(f"node {i}: bad piece kind {p.kind!r}")
        if (p.kind == "const" or p.kind in CONST_KINDS) and p.c is None:
            raise ValidationError(f"node {i}: piece {p.kind} needs a constant")


# ---------------------------------------------------------------- text format


def _frac(tok: str, line_no: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(line_no, f"bad rational {tok!r}") from None


def _int(tok: str, line_no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(line_no, f"expected a node id, got {tok!r}") from None


def _bound(tok: str, line_no: int):
    if tok in ("-inf", "inf", "+inf"):
        return None
    return _frac(tok, line_no)


def _parse_piece(tok: str, line_no: int) -> Piece:
    if not tok.startswith("(") or "]:" not in tok:
        raise ParseError(line_no, f"bad piece {tok!r}; expected (lo,hi]:kind")
    interval, body = tok[1:].split("]:", 1)
    try:
        lo_s, hi_s = interval.split(",")
    except ValueError:
        raise ParseError(line_no, f"bad interval in {tok!r}") from None
    kind, _, c = body.partition("=")
    return Piece(_bound(lo_s, line_no), _bound(hi_s, line_no), kind, _frac(c, line_no) if c else None)


def parse_dag(text: str) -> DagProgram:
    lines = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        for part in raw.split("#", 1)[0].split(";"):
            if part.strip():
                lines.append((line_no, part.split()))
    nodes, outputs, arity = [], None, None
    for line_no, toks in lines:
        head = toks[0]
        if outputs is not None:
            raise ParseError(line_no, "nothing may follow the out line")
        if head == "arity":
            arity = _int(toks[1], line_no)
        elif head.startswith("i") and head[1:].isdigit() and len(toks) == 1:
            nodes.append(Input(int(head[1:])))
        elif head == "c" and len(toks) == 2:
            nodes.append(Const(_frac(toks[1], line_no)))
        elif head == "u" and len(toks) == 3:
            nodes.append(Unary(toks[1], _int(toks[2], line_no)))
        elif head == "b" and len(toks) == 4:
            nodes.append(Binary(toks[1], _int(toks[2], line_no), _int(toks[3], line_no)))
        elif head == "p" and len(toks) >= 3:
            pieces = tuple(_parse_piece(t, line_no) for t in toks[2:])
            nodes.append(Piecewise(_int(toks[1], line_no), pieces))
        elif head == "out" and len(toks) >= 2:
            outputs = tuple(_int(t, line_no) for t in toks[1:])
        else:
            raise ParseError(line_no, f"unrecognized line {' '.join(toks)!r}")
    if outputs is None:
        raise ParseError(lines[-1][0] if lines else 0, "missing out line")
    if arity is None:
        arity = 1 + max((n.index for n in nodes if isinstance(n, Input)), default=-1)
    return DagProgram(tuple(nodes), outputs, arity)


def _fmt(v) -> str:
    return "inf" if v is None else str(v)


def to_text(dag: DagProgram) -> str:
    """Canonical text form; ``parse_dag(to_text(d)) == d``."""
    lines = [f"arity {dag.arity}"]
    for node in dag.nodes:
        if isinstance(node, Input):
            lines.append(f"i{node.index}")
        elif isinstance(node, Const):
            lines.append(f"c {node.value}")
        elif isinstance(node, Unary):
            lines.append(f"u {node.kind} {node.src}")
        elif isinstance(node, Binary):
            lines.append(f"b {node.kind} {node.a} {node.b}")
        else:
            parts = []
            for p in node.pieces:
                lo = "-inf" if p.lo is None else str(p.lo)
                body = p.kind if p.c is None else f"{p.kind}={p.c}"
                parts.append(f"({lo},{_fmt(p.hi)}]:{body}")
            lines.append(f"p {node.src} " + " ".join(parts))
    lines.append("out " + " ".join(map(str, dag.outputs)))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- evaluation


def evaluate(dag: DagProgram, inputs: Sequence, meter: OpMeter) -> list:
    """Evaluate node by node; every Binary node charges one unit to ``meter``."""
    if len(inputs) != dag.arity:
        raise ValidationError(f"expected {dag.arity} inputs, got {len(inputs)}")
    vals = []
    for node in dag.nodes:
        if isinstance(node, Input):
            v = inputs[node.index]
        elif isinstance(node, Const):
            v = node.value
        elif isinstance(node, Unary):
            v = unary_op(node.kind, vals[node.src])
        elif isinstance(node, Binary):
            v = binary_op(node.kind, vals[node.a], vals[node.b], meter)
        else:
            x = vals[node.src]
            piece = next(p for p in node.pieces if p.contains(x))
            v = unary_op(piece.kind, x, piece.c)
        vals.append(v)
    return [vals[o] for o in dag.outputs]


# ---------------------------------------------------------- dependency bound


def dependency_sets(dag: DagProgram) -> list:
    """Reachable-input set of every node (a superset of semantic dependence)."""
    sets = []
    for node in dag.nodes:
        if isinstance(node, Input):
            s = frozenset({node.index})
        else:
            s = frozenset().union(*(sets[p] for p in _preds(node)))
        sets.append(s)
    return sets


PROBE_GRID = tuple(Fraction(k, 4) for k in range(-16, 17))
SMALL_GRID = tuple(Fraction(k, 2) for k in range(-8, 8))  # 16 points


def _safe(f, point):
    try:
        return True, f(*point)
    except (DivisionByZero, ZeroDivisionError, DomainError, InexactUnary):
        return False, None


def semantic_dependence(f: Callable, arity: int, probes: int = 200, seed: int = 0,
                        grid: Sequence = PROBE_GRID) -> frozenset:
    """Inputs on which ``f`` provably depends, found by random paired probes.

    Sound: an index is reported only after two points differing in that
    coordinate alone gave different outputs. May miss dependencies.
    """
    if probes < 1:
        raise ValueError("probes must be >= 1")
    rng = random.Random(seed)
    found = set()
    for i in range(arity):
        for _ in range(probes):
            base = [rng.choice(grid) for _ in range(arity)]
            a, b = rng.sample(list(grid), 2)
            p, q = list(base), list(base)
            p[i], q[i] = a, b
            ok1, v1 = _safe(f, p)
            ok2, v2 = _safe(f, q)
            if ok1 and ok2 and v1 != v2:
                found.add(i)
                break
    return frozenset(found)


def exhaustive_dependence(f: Callable, arity: int, grid: Sequence = SMALL_GRID) -> frozenset:
    """Exact dependence of ``f`` restricted to ``grid**arity`` (use for arity <= 3)."""
    from itertools import product

    found = set()
    for i in range(arity):
        done = False
        for base in product(grid, repeat=arity - 1):
            outs = set()
            for v in grid:
                point = list(base[:i]) + [v] + list(base[i:])
                ok, y = _safe(f, point)
                if ok:
                    outs.add(y)
                if len(outs) > 1:
                    found.add(i)
                    done = True
                    break
            if done:
                break
    return frozenset(found)


@dataclass
class DependencyReport:
    sets: list
    semantic: frozenset | None
    semantic_size: int
    static_binary: int
    bound: int
    edges: list = field(default_factory=list)
    witness_ok: bool = True
    executed: int | None = None

    @property
    def verdict(self) -> str:
        return "pass" if self.static_binary >= self.bound and self.witness_ok else "fail"

    def summary(self) -> str:
        return (f"semantic deps={self.semantic_size}, static binary ops={self.static_binary}, "
                f"bound={self.bound}, {self.verdict}")


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def certify_lower_bound(dag: DagProgram, m: int, semantic: frozenset | None = None) -> DependencyReport:
    """Check the dependency lower bound: a program whose output depends on m
    inputs needs at least m - 1 binary nodes.

    Builds the connectivity witness: scanning Binary nodes in order, each adds
    at most one edge joining two inputs of its reachable set that are not yet
    connected. Every node's reachable set must end up inside one component.
    """
    if m > dag.arity:
        raise ValueError("semantic set larger than the arity")
    sets = dependency_sets(dag)
    uf = _UnionFind(dag.arity)
    edges = []
    for node, s in zip(dag.nodes, sets):
        if not isinstance(node, Binary) or len(s) < 2:
            continue
        members = sorted(s)
        roots = {}
        for v in members:
            roots.setdefault(uf.find(v), v)
        if len(roots) > 1:
            a, b = list(roots.values())[:2]
            uf.union(a, b)
            edges.append((a, b))
    witness_ok = all(len({uf.find(v) for v in s}) <= 1 for s in sets)
    return DependencyReport(sets=sets, semantic=semantic, semantic_size=m,
                            static_binary=dag.binary_count, bound=max(m - 1, 0),
                            edges=edges, witness_ok=witness_ok)


def analyze(dag: DagProgram, probes: int = 200, seed: int = 0) -> DependencyReport:
    """Probe the program for semantic dependence on its first output, then certify."""
    out = dag.outputs[0]
    sub = DagProgram(dag.nodes[: out + 1], (out,), dag.arity)
    sem = semantic_dependence(lambda *xs: evaluate(sub, list(xs), FREE)[0], dag.arity, probes, seed)
    return certify_lower_bound(sub, len(sem), sem)


# ------------------------------------------------------- standard programs


def sum_dag(m: int) -> DagProgram:
    """x0 + x1 + ... + x_{m-1} with m - 1 additions."""
    nodes = [Input(i) for i in range(m)]
    acc = 0
    for i in range(1, m):
        nodes.append(Binary("add", acc, i))
        acc = len(nodes) - 1
    return DagProgram(tuple(nodes), (acc,), m)


def dot_dag(v: Sequence) -> DagProgram:
    """x . v for a fixed coefficient vector v: 2n - 1 binary nodes."""
    n = len(v)
    nodes = [Input(i) for i in range(n)] + [Const(Fraction(c)) for c in v]
    prods = []
    for i in range(n):
        nodes.append(Binary("mul", i, n + i))
        prods.append(len(nodes) - 1)
    acc = prods[0]
    for p in prods[1:]:
        nodes.append(Binary("add", acc, p))
        acc = len(nodes) - 1
    return DagProgram(tuple(nodes), (acc,), n)


def dot_product_dag(n: int) -> DagProgram:
    """u . w with both vectors as inputs (arity 2n)."""
    nodes = [Input(i) for i in range(2 * n)]
    prods = []
    for i in range(n):
        nodes.append(Binary("mul", i, n + i))
        prods.append(len(nodes) - 1)
    acc = prods[0]
    for p in prods[1:]:
        nodes.append(Binary("add", acc, p))
        acc = len(nodes) - 1
    return DagProgram(tuple(nodes), (acc,), 2 * n)


def floor_parity_dag(x) -> DagProgram:
    """d -> floor(d x) - 2 floor(d x / 2) using three binary nodes.

    The doubling of the second floor is a piecewise piece (mulc=2) and free.
    """
    x = Fraction(x)
    nodes = (
        Input(0),                 # 0: d
        Const(x),                 # 1
        Binary("mul", 0, 1),      # 2: d x
        Const(Fraction(2)),       # 3
        Binary("div", 2, 3),      # 4: d x / 2
        Unary("floor", 2),        # 5
        Unary("floor", 4),        # 6
        Piecewise(6, (Piece(None, None, "mulc", Fraction(2)),)),  # 7
        Binary("sub", 5, 7),      # 8
    )
    return DagProgram(nodes, (8,), 1)


def affine_mod_dag(c0, c1, k: int) -> DagProgram:
    """x -> (c0 x + c1) mod k for integer x, in five binary nodes."""
    nodes = (
        Input(0),
        Const(Fraction(c0)),
        Const(Fraction(c1)),
        Const(Fraction(k)),
        Binary("mul", 0, 1),      # 4
        Binary("add", 4, 2),      # 5: v
        Binary("div", 5, 3),      # 6: v / k
        Unary("floor", 6),        # 7
        Binary("mul", 7, 3),      # 8
        Binary("sub", 5, 8),      # 9: v - k floor(v/k)
    )
    return DagProgram(nodes, (9,), 1)


def random_dag(rng: random.Random, max_arity: int = 6, max_nodes: int = 20) -> DagProgram:
    """Random valid program over exact rationals (no sqrt/exp/ln)."""
    arity = rng.randint(1, max_arity)
    nodes: list = [Input(i) for i in range(arity)]
    total = rng.randint(arity + 1, max(arity + 1, max_nodes))
    while len(nodes) < total:
        r = rng.random()
        src = rng.randrange(len(nodes))
        if r < 0.1:
            nodes.append(Const(Fraction(rng.randint(-3, 3), rng.randint(1, 3))))
        elif r < 0.25:
            nodes.append(Unary(rng.choice(("identity", "floor", "ceil", "abs")), src))
        elif r < 0.35:
            cut = Fraction(rng.randint(-4, 4), 2)
            kinds = ["identity", "floor", "abs"]
            pieces = (
                Piece(None, cut, rng.choice(kinds + ["const"]), Fraction(rng.randint(-2, 2))),
                Piece(cut, None, rng.choice(kinds + ["mulc"]), Fraction(rng.randint(-2, 2))),
            )
            pieces = tuple(p if p.kind in ("const", "mulc") else Piece(p.lo, p.hi, p.kind) for p in pieces)
            nodes.append(Piecewise(src, pieces))
        else:
            other = rng.randrange(len(nodes))
            nodes.append(Binary(rng.choice(BINARY_KINDS), src, other))
    return DagProgram(tuple(nodes), (len(nodes) - 1,), arity)
