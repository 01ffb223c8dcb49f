"""Command-line front end.

    opcap run --config game.json [--out transcript.json] [--format json|csv] [--seed N] [--max-rounds N]
    opcap verify --suite exact-bounds [--format csv|json] [--out report.csv]
    opcap dag analyze prog.dag [--probes N] [--seed N]
    opcap dag eval prog.dag 1 2 3 4 5 6

Exit codes: 0 pass, 1 a verdict failed, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import dag as dagmod
from .config import load_experiment
from .engine import ReportRow, rows_to_csv, run_game
from .errors import AdversaryInconsistent, OpcapError
from .numerics import OpMeter
from .suites import SUITES, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

__all__ = ["main", "ReportRow"]


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    exp = load_experiment(args.config, args.seed, args.max_rounds)
    try:
        tr = run_game(exp.family, exp.learner, exp.adversary, exp.protocol, exp.config)
    except AdversaryInconsistent as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    body = tr.to_json() + "\n" if args.format == "json" else tr.to_csv()
    if args.out:
        Path(args.out).write_text(body)
    print(tr.summary())
    return EXIT_PASS if tr.clean else EXIT_FAIL


def cmd_verify(args) -> int:
    rows = run_suite(args.suite, workers=args.workers, seed=args.seed or 0)
    dicts = [r.to_dict() for r in rows]
    text = json.dumps(dicts, indent=2) + "\n" if args.format == "json" else rows_to_csv(dicts)
    _write(text, args.out)
    failed = [r for r in rows if r.verdict != "pass"]
    for r in failed:
        print(f"FAIL {r.config_id}: measured={r.mistakes} {r.relation} {r.bound_display()} "
              f"status={r.status} {r.note}", file=sys.stderr)
    print(f"{args.suite}: {len(rows) - len(failed)}/{len(rows)} rows pass", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_PASS


def _parse_inputs(tokens) -> list:
    values = []
    for tok in tokens:
        for part in tok.replace(",", " ").split():
            values.append(Fraction(part))
    return values


def cmd_dag(args) -> int:
    program = dagmod.parse_dag(Path(args.file).read_text())
    if args.action == "analyze":
        report = dagmod.analyze(program, probes=args.probes, seed=args.seed or 0)
        print(report.summary())
        return EXIT_PASS if report.verdict == "pass" else EXIT_FAIL
    values = _parse_inputs(args.inputs)
    meter = OpMeter(None)
    outputs = dagmod.evaluate(program, values, meter)
    shown = ", ".join(str(v) for v in outputs)
    print(f"{shown}, ops={meter.used}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opcap", description="Mistake-bound games under per-round arithmetic caps.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="play one game described by a JSON config")
    run.add_argument("--config", required=True)
    run.add_argument("--out")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--seed", type=int)
    run.add_argument("--max-rounds", type=int, dest="max_rounds")
    run.set_defaults(func=cmd_run)

    verify = sub.add_parser("verify", help="run a verification suite and print its report table")
    verify.add_argument("--suite", required=True, choices=sorted(SUITES))
    verify.add_argument("--format", choices=("csv", "json"), default="csv")
    verify.add_argument("--out")
    verify.add_argument("--seed", type=int)
    verify.add_argument("--workers", type=int, default=1)
    verify.set_defaults(func=cmd_verify)

    dag = sub.add_parser("dag", help="evaluate or analyze an arithmetic program")
    dag.add_argument("action", choices=("analyze", "eval"))
    dag.add_argument("file")
    dag.add_argument("inputs", nargs="*")
    dag.add_argument("--probes", type=int, default=200)
    dag.add_argument("--seed", type=int)
    dag.set_defaults(func=cmd_dag)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    if getattr(args, "max_rounds", None) is not None and args.max_rounds < 1:
        print("error: --max-rounds must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (OpcapError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
