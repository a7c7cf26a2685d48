"""Command-line front end.

Exit codes: 0 all conditions pass / reconstruction succeeded / all trials
passed; 1 a condition failed; 2 input error; 3 internal assertion failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .conditions import (
    ConditionReport,
    EngineError,
    NotQuasiLinear,
    HessianNotSymmetric,
    SodeSystem,
    all_passed,
    classical_check,
    classical_gh_check,
    decompose,
    generalized_check_full,
    generalized_check_minimal,
    gh_form_check_system,
    redundancy_witness,
)
from .homotopy import PostconditionError
from .numcheck import RandomSpec, random_conforming_system
from .parser import ParseError
from .reconstruct import ReconstructionRefused, StepAssertionError, reconstruct
from .sysfile import InputError, load_system_file

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

SUITES = ("classical", "generalized", "minimal", "ghform", "all")
_INDEX_NAMES = "abc"


def _suite_reports(name: str, system: SodeSystem) -> list[ConditionReport]:
    if name == "classical":
        reports = classical_check(system)
        try:
            reports = reports + classical_gh_check(decompose(system))
        except (NotQuasiLinear, HessianNotSymmetric):
            pass
        return reports
    if name == "generalized":
        return generalized_check_full(system) + redundancy_witness(system)
    if name == "minimal":
        return generalized_check_minimal(system)
    if name == "ghform":
        return gh_form_check_system(system)
    raise ValueError(name)


def _index_label(index: tuple[int, ...]) -> str:
    names = ",".join(_INDEX_NAMES[: len(index)])
    values = ",".join(str(i) for i in index)
    return f"({names})=({values})" if len(index) > 1 else f"{names}={values}"


def _format_report(rep: ConditionReport) -> list[str]:
    if rep.passed:
        suffix = f" ({rep.note})" if rep.note == "hypothesis not met" else ""
        return [f"  {rep.condition:<14} PASS{suffix}"]
    lines = []
    for index, residual in rep.residuals:
        lines.append(f"  {rep.condition:<14} FAIL at {_index_label(index)}: residual {residual}")
    if rep.note:
        lines.append(f"  {'':<14} note: {rep.note}")
    return lines


def _system_header(sf) -> str:
    title = sf.name or "system"
    params = f", params: {', '.join(sf.parameters)}" if sf.parameters else ""
    return f"{title} (n={sf.n}{params})"


def _emit(payload: dict, fmt: str, text_lines: list[str]) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _cmd_check(args) -> int:
    sf = load_system_file(args.file)
    system = sf.to_system()
    names = ["classical", "generalized", "minimal", "ghform"] if args.suite == "all" else [args.suite]
    suites = [(name, _suite_reports(name, system)) for name in names]
    ok = all(all_passed(reps) for _, reps in suites)
    lines = [_system_header(sf)]
    for name, reps in suites:
        lines.append(f"suite {name}: {'PASS' if all_passed(reps) else 'FAIL'}")
        for rep in reps:
            lines.extend(_format_report(rep))
    lines.append(f"verdict: {'PASS' if ok else 'FAIL'}")
    code = EXIT_OK if ok else EXIT_FAIL
    payload = {
        "command": "check",
        "system": sf.to_dict(),
        "suites": [
            {"suite": name, "passed": all_passed(reps), "reports": [r.to_dict() for r in reps]}
            for name, reps in suites
        ],
        "passed": ok,
        "exit_code": code,
    }
    _emit(payload, args.format, lines)
    return code


def _cmd_reconstruct(args) -> int:
    sf = load_system_file(args.file)
    system = sf.to_system()
    try:
        trace = reconstruct(system)
    except ReconstructionRefused as exc:
        lines = [_system_header(sf), "reconstruction refused: minimal conditions fail"]
        for rep in exc.reports:
            lines.extend(_format_report(rep))
        payload = {
            "command": "reconstruct",
            "system": sf.to_dict(),
            "status": "refused",
            "reports": [r.to_dict() for r in exc.reports],
            "exit_code": EXIT_FAIL,
        }
        _emit(payload, args.format, lines)
        return EXIT_FAIL
    fields = trace.serialize()
    lines = [_system_header(sf), f"Lambda = {trace.Lambda}", f"D = {trace.D}", "residual: 0"]
    if args.emit_trace:
        lines.append("trace:")
        lines.extend(f"  {k} = {v}" for k, v in fields.items())
    payload = {
        "command": "reconstruct",
        "system": sf.to_dict(),
        "status": "ok",
        "Lambda": fields["Lambda"],
        "D": fields["D"],
        "trace": fields,
        "exit_code": EXIT_OK,
    }
    _emit(payload, args.format, lines)
    return EXIT_OK


def _cmd_roundtrip(args) -> int:
    if args.trials < 0 or args.n < 1 or args.degree < 0:
        raise InputError("trials >= 0, n >= 1 and degree >= 0 are required")
    lines = []
    trials = []
    code = EXIT_OK
    for i in range(args.trials):
        spec = RandomSpec(n=args.n, max_degree=args.degree, max_terms=args.terms, seed=(args.seed + i) % 2**64)
        system = random_conforming_system(spec)
        entry = {"trial": i, "seed": spec.seed, "system": [str(e) for e in system.f]}
        try:
            trace = reconstruct(system)
        except ReconstructionRefused as exc:
            failed = [r.condition for r in exc.reports if not r.passed]
            entry.update(status="fail", error=f"conforming system refused: {', '.join(failed)}")
            code = EXIT_INTERNAL
        except (StepAssertionError, PostconditionError, EngineError) as exc:
            entry.update(status="fail", error=str(exc))
            code = EXIT_INTERNAL
        else:
            entry.update(status="pass", Lambda=str(trace.Lambda), D=str(trace.D))
        trials.append(entry)
        lines.append(f"trial {i} seed={spec.seed}: {entry['status'].upper()}"
                     + (f" ({entry['error']})" if "error" in entry else ""))
    passed = sum(t["status"] == "pass" for t in trials)
    lines.append(f"{passed}/{len(trials)} trials passed")
    payload = {
        "command": "roundtrip",
        "n": args.n,
        "degree": args.degree,
        "seed": args.seed,
        "trials": trials,
        "passed": passed,
        "exit_code": code,
    }
    _emit(payload, args.format, lines)
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="Report format.")

    parser = argparse.ArgumentParser(
        prog="helmholtz",
        description="Decide whether second-order ODEs are Lagrangian with gradient-type dissipation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="Run a condition suite on a system file.")
    p.add_argument("file")
    p.add_argument("--suite", choices=SUITES, default="minimal")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("reconstruct", parents=[common], help="Recover a Lagrangian and dissipation function.")
    p.add_argument("file")
    p.add_argument("--emit-trace", action="store_true", help="Print every intermediate.")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("roundtrip", parents=[common], help="Random compose/reconstruct property harness.")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--terms", type=int, default=5, help="Maximum terms per random polynomial.")
    p.set_defaults(func=_cmd_roundtrip)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    fmt = getattr(args, "format", "text")
    try:
        return args.func(args)
    except (InputError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if fmt == "json":
            _emit({"command": args.command, "error": str(exc), "exit_code": EXIT_INPUT}, fmt, [])
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        if fmt == "json":
            _emit({"command": args.command, "error": str(exc), "exit_code": EXIT_INTERNAL}, fmt, [])
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
