"""Experiment configuration: a JSON document describing one game.

Example::

    {"family": {"name": "linear_real", "n": 3},
     "learner": {"name": "span"},
     "adversary": {"name": "basis", "tail": 2},
     "protocol": "standard", "cap": null, "rounds": 20, "seed": 0}

``hidden`` (a member in the family's JSON form) is optional; without it the
hidden member is drawn from ``seed``. ``reduction`` wraps copies of the
learner in a meta-learner. ``adversary.lies`` adds a lying wrapper.
Rationals may be given as ints or "p/q" strings.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import adversaries as adv
from . import families as fam
from . import learners as lrn
from . import reductions as red
from .engine import GameConfig, Protocol, PROTOCOLS
from .errors import ConfigError, OpcapError
from .values import Left, Right

TOP_KEYS = {"family", "hidden", "learner", "reduction", "adversary", "protocol", "cap", "rounds", "seed", "mode", "tol"}


def _frac(v, path):
    try:
        return Fraction(v)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(path, f"expected a rational number, got {v!r}") from None


def _int(obj, key, path, default=None, minimum=None):
    if key not in obj:
        if default is None:
            raise ConfigError(f"{path}.{key}", "required")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}.{key}", f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"{path}.{key}", f"must be at least {minimum}")
    return v


def _section(doc, key, path="$"):
    v = doc.get(key)
    if isinstance(v, str):
        v = {"name": v}
    if not isinstance(v, dict) or "name" not in v:
        raise ConfigError(f"{path}.{key}", "expected an object with a 'name'")
    return v


# ------------------------------------------------------------------ families


def build_family(node: dict, path: str = "$.family"):
    name = node["name"]
    try:
        if name == "linear_real":
            return fam.LinearReal(_int(node, "n", path, minimum=1))
        if name == "linear_field":
            return fam.LinearField(_int(node, "p", path, minimum=2), _int(node, "n", path, minimum=1))
        if name == "poly":
            degrees = node.get("degrees")
            if not isinstance(degrees, list) or not degrees:
                raise ConfigError(f"{path}.degrees", "expected a nonempty list of degrees")
            return fam.BoundedDegreePoly(tuple(degrees))
        if name == "one_layer":
            return fam.OneLayer(_int(node, "n", path, minimum=1), node.get("activation", "leaky_relu"),
                                _frac(node.get("alpha", "1/2"), f"{path}.alpha"))
        if name == "softmax":
            return fam.SoftmaxLayer(_int(node, "n", path, minimum=1), _int(node, "k", path, minimum=2))
        if name == "sparse_support":
            return fam.SparseSupport(_int(node, "k", path, minimum=2), _int(node, "n", path, minimum=1))
        if name == "combined_star":
            return fam.CombinedStar(_int(node, "p", path, minimum=2), _int(node, "n", path, minimum=1))
        if name == "reciprocal_tuple":
            return fam.ReciprocalTuple(_int(node, "r", path, minimum=1))
        if name == "reciprocal_pair":
            return fam.ReciprocalPair()
        if name == "finite":
            k = _int(node, "k", path, minimum=2)
            if "members" in node:
                domain = node.get("domain", list(range(len(node["members"][0]))))
                return fam.FiniteExplicit(domain, [tuple(m) for m in node["members"]], k)
            rng = random.Random(_int(node, "seed", path, default=0))
            return fam.random_finite_family(rng, _int(node, "size", path, minimum=1),
                                            _int(node, "domain_size", path, minimum=1), k)
        if name == "affine_mod":
            k = _int(node, "k", path, minimum=2)
            coeffs = node.get("coeffs")
            if not isinstance(coeffs, list) or not coeffs:
                raise ConfigError(f"{path}.coeffs", "expected a nonempty list of [c0, c1] pairs")
            return fam.affine_mod_family(k, [tuple(c) for c in coeffs], node.get("domain"))
        if name == "floor_parity":
            return fam.FloorParity()
        if name == "two_layer_indicator":
            eps = node.get("eps")
            return fam.TwoLayerReluIndicator(_frac(node.get("alpha", 0), f"{path}.alpha"),
                                             None if eps is None else _frac(eps, f"{path}.eps"))
        if name == "cart":
            return fam.cart_lift(build_family(_section(node, "base", path), f"{path}.base"),
                                 _int(node, "r", path, minimum=1))
    except ConfigError:
        raise
    except (OpcapError, ValueError, TypeError) as exc:
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(f"{path}.name", f"unknown family {name!r}")


# ------------------------------------------------------------------ learners


def _learner_factory(family, node: dict, path: str):
    name = node["name"]
    table = {
        "span": lambda: lrn.SpanLearner(family, bool(node.get("capped", False))),
        "relu": lambda: lrn.ReluLearner(family, bool(node.get("capped", False))),
        "memorizer": lambda: lrn.ZeroDefaultMemorizer(family),
        "reciprocal_check": lambda: lrn.ReciprocalCheck(family),
        "sequential_elimination": lambda: lrn.SequentialElimination(family),
        "constant": lambda: lrn.ConstantLearner(family, node.get("value", family.default)),
        "random": lambda: lrn.RandomGuess(family, lrn.default_candidates(family), node.get("seed", 0)),
        "combined_star": lambda: red.CombinedStarLearner(family),
    }
    if name == "phase":
        base = lrn.SpanLearner(family)
        W = _int(node, "W", path, default=base.guess_cost(), minimum=1)
        return lambda: lrn.phase_wrapper(lrn.SpanLearner(family), base.mistake_bound, base.update_bound(), W)
    if name not in table:
        raise ConfigError(f"{path}.name", f"unknown learner {name!r}")
    return table[name]


def build_learner(family, node: dict, reduction: dict | None = None):
    factory = _learner_factory(family, node, "$.learner")
    try:
        factory()  # surface incompatibilities early
    except (OpcapError, ValueError, TypeError, AttributeError) as exc:
        raise ConfigError("$.learner", str(exc)) from None
    if reduction is None:
        return factory()
    path = "$.reduction"
    name = reduction["name"]
    M = _int(reduction, "M", path, minimum=0)
    try:
        if name == "bandit_majority":
            return red.bandit_majority(family, factory, M)
        if name == "agnostic_strong_majority":
            return red.agnostic_strong_majority(family, factory, M)
        if name == "agnostic_weak_majority":
            return red.agnostic_weak_majority(family, factory, M)
        if name == "ambiguous_majority":
            return red.ambiguous_majority(family, factory, M, _int(reduction, "r", path, minimum=1))
        if name == "agnostic_strong_restart":
            return red.agnostic_strong_restart(family, factory, M)
    except OpcapError as exc:
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(f"{path}.name", f"unknown reduction {name!r}")


# ------------------------------------------------------------------ adversaries


def _decode_input(family, x):
    if isinstance(family, fam.CombinedStar):
        if isinstance(x, dict) and "left" in x:
            return Left(tuple(int(v) for v in x["left"]))
        if isinstance(x, dict) and "right" in x:
            return Right(int(x["right"]))
    if isinstance(x, list):
        if isinstance(family, fam.LinearField):
            return tuple(int(v) for v in x)
        return tuple(Fraction(v) for v in x)
    if isinstance(family, (fam.FiniteExplicit, fam.SparseSupport, fam.FloorParity)):
        return int(x)
    return Fraction(x)


def build_adversary(family, member, node: dict, rounds: int, seed: int):
    path = "$.adversary"
    name = node["name"]
    tail = _int(node, "tail", path, default=0, minimum=0)
    try:
        if name == "basis":
            base = adv.basis_adversary(family, tail, seed)
        elif name == "poly_power":
            base = adv.poly_power_adversary(family, tail, seed)
        elif name == "floor_parity":
            base = adv.floor_parity_adversary(family)
        elif name == "bisection":
            base = adv.bisection_indicator_adversary(family)
        elif name == "version_space":
            base = adv.version_space_adversary(family, rounds)
        elif name == "sparse":
            base = adv.sparse_support_adversary(family, tail, seed)
        elif name == "combined_star":
            base = adv.combined_star_adversary(family, tail, seed)
        elif name == "hidden":
            inputs = node.get("inputs")
            if inputs is not None:
                inputs = [_decode_input(family, x) for x in inputs]
            elif isinstance(family, fam.ReciprocalTuple):
                inputs = adv.reciprocal_inputs(family, member)
            base = adv.hidden_function_adversary(family, member, inputs, rounds, seed)
        else:
            raise ConfigError(f"{path}.name", f"unknown adversary {name!r}")
        lies = node.get("lies")
        if lies is not None:
            if not isinstance(lies, dict):
                raise ConfigError(f"{path}.lies", "expected an object")
            base = adv.lying_wrapper(base, _int(lies, "eta", f"{path}.lies", minimum=0),
                                     lies.get("schedule", []), lies.get("mode", "strong"))
    except ConfigError:
        raise
    except (OpcapError, ValueError, TypeError) as exc:
        raise ConfigError(path, str(exc)) from None
    return base


# ------------------------------------------------------------------ top level


def build_protocol(v, path="$.protocol") -> Protocol:
    if isinstance(v, str):
        v = {"kind": v}
    if not isinstance(v, dict) or v.get("kind") not in PROTOCOLS:
        raise ConfigError(path, f"expected one of {', '.join(PROTOCOLS)}")
    return Protocol(v["kind"], _int(v, "eta", path, default=0, minimum=0), _int(v, "r", path, default=1, minimum=1))


@dataclass
class Experiment:
    family: object
    member: object
    learner: object
    adversary: object
    protocol: Protocol
    config: GameConfig


def load_document(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return doc


def build_experiment(doc: dict, seed: int | None = None, max_rounds: int | None = None) -> Experiment:
    if not isinstance(doc, dict):
        raise ConfigError("$", "expected a JSON object")
    unknown = sorted(set(doc) - TOP_KEYS)
    if unknown:
        raise ConfigError(f"$.{unknown[0]}", "unknown field")
    seed = _int(doc, "seed", "$", default=0) if seed is None else seed
    rounds = _int(doc, "rounds", "$", default=100, minimum=1) if max_rounds is None else max_rounds
    cap = doc.get("cap")
    if cap is not None and (isinstance(cap, bool) or not isinstance(cap, int) or cap < 0):
        raise ConfigError("$.cap", "expected null or a nonnegative integer")
    mode = doc.get("mode", "exact")
    if mode not in ("exact", "approx"):
        raise ConfigError("$.mode", "expected 'exact' or 'approx'")
    family = build_family(_section(doc, "family"))
    if "hidden" in doc:
        try:
            member = family.parse_member(doc["hidden"])
        except (OpcapError, ValueError, TypeError, KeyError) as exc:
            raise ConfigError("$.hidden", f"not a member of {family.name}: {exc}") from None
    else:
        member = family.random_member(random.Random(seed))
    reduction = _section(doc, "reduction") if doc.get("reduction") is not None else None
    learner = build_learner(family, _section(doc, "learner"), reduction)
    adversary = build_adversary(family, member, _section(doc, "adversary"), rounds, seed)
    protocol = build_protocol(doc.get("protocol", "standard"))
    config = GameConfig(cap=cap, max_rounds=rounds, seed=seed, mode=mode, tol=float(doc.get("tol", 1e-9)))
    return Experiment(family, member, learner, adversary, protocol, config)


def load_experiment(path, seed=None, max_rounds=None) -> Experiment:
    return build_experiment(load_document(path), seed, max_rounds)
