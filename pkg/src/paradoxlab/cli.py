"""Command-line front end.

Exit codes: 0 success, 1 proof invalid or matrix mismatch, 2 parse error,
3 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .core import TruthValue
from .corpus import load_expected, run_matrix
from .kernel import (
    ALL_LINES,
    ASSUMPTIONS_ONLY,
    BUILTIN_PROFILES,
    ProfileError,
    audit_resources,
    build_profile,
    check_proof,
)
from .semantics import (
    SCHEMAS,
    Logic,
    SemanticsError,
    evaluate,
    format_valuation,
    rule_valid,
    solve_definitions,
)
from .syntax import Document, ParseError, ScriptError, parse_formula, parse_script

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_USAGE = 0, 1, 2, 3

_SCOPES = {"assumptions": ASSUMPTIONS_ONLY, "all": ALL_LINES}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


class _Toggle(argparse.Action):
    """Collect --enable/--disable in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        toggles = list(getattr(namespace, "toggles", None) or [])
        rules = [r.strip() for r in values.split(",") if r.strip()]
        toggles.append((self.dest, rules))
        namespace.toggles = toggles


def _split(text: Optional[str]) -> list[str]:
    return [t.strip() for t in (text or "").split(",") if t.strip()]


def _valuation(text: Optional[str]) -> dict[str, TruthValue]:
    out = {}
    for item in _split(text):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"bad valuation entry {item!r} (expected name=value)")
        try:
            out[key.strip()] = TruthValue.parse(value)
        except ValueError as e:
            raise UsageError(str(e)) from None
    return out


def _logic(text: str) -> Logic:
    try:
        return Logic.parse(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _load(path: str) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return parse_script(text)


def _proofs(doc: Document, name: Optional[str]):
    if name is None:
        return list(doc.proofs)
    try:
        return [doc.proof(name)]
    except KeyError:
        raise UsageError(f"no proof named {name!r}") from None


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "machine":
        body = {"tool": "paradoxlab", "version": __version__, "command": args.command}
        body.update(payload)
        print(json.dumps(body, indent=2, ensure_ascii=False))
    else:
        print(text)


# commands


def cmd_check(args) -> int:
    doc = _load(args.file)
    enable, disable = [], []
    for kind, rules in args.toggles or []:
        (enable if kind == "enable" else disable).extend(rules)
    try:
        profile = build_profile(args.profile, enable, disable, args.structural, _SCOPES.get(args.linear_scope))
    except ProfileError as e:
        raise UsageError(str(e)) from None
    results = [check_proof(p, doc.definitions, profile) for p in _proofs(doc, args.proof)]

    text = []
    for r in results:
        text.append(f"proof {r.proof} under {profile.name}")
        for label, failure in r.lines:
            text.append(f"  {label:<6} " + ("ok" if failure is None else f"FAIL  {failure}"))
        if r.valid:
            text.append(f"  valid: {r.established}")
        else:
            label, failure = r.first_failure
            text.append(f"  invalid: first failure at {label}: {failure}")
    payload = {
        "file": args.file,
        "profile": profile.describe(),
        "results": [r.as_dict() for r in results],
        "valid": all(r.valid for r in results),
    }
    _emit(args, payload, "\n".join(text))
    return EXIT_OK if payload["valid"] else EXIT_INVALID


def cmd_audit(args) -> int:
    doc = _load(args.file)
    scope = ALL_LINES if args.all_lines else ASSUMPTIONS_ONLY
    reports = [(p.name, audit_resources(p, scope)) for p in _proofs(doc, args.proof)]
    text = []
    for name, report in reports:
        text.append(f"proof {name}")
        text.extend(f"  {u}" for u in report.entries)
        points = report.contraction_points
        text.append("  contraction points: " + (", ".join(points) if points else "none"))
    payload = {"file": args.file, "audits": [{"proof": n, **r.as_dict()} for n, r in reports]}
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def cmd_semantics_eval(args) -> int:
    formula = parse_formula(args.formula)
    logic = _logic(args.logic)
    valuation = _valuation(args.valuation)
    try:
        value = evaluate(formula, valuation, logic)
    except SemanticsError as e:
        raise UsageError(str(e)) from None
    designated = logic.is_designated(value)
    payload = {
        "formula": args.formula,
        "logic": logic.value,
        "valuation": {k: str(valuation[k]) for k in sorted(valuation)},
        "value": str(value),
        "designated": designated,
    }
    _emit(args, payload, f"{value} ({'designated' if designated else 'undesignated'})")
    return EXIT_OK


def cmd_semantics_rule(args) -> int:
    if args.rule not in SCHEMAS:
        raise UsageError(f"unknown rule schema {args.rule!r} (known: {', '.join(SCHEMAS)})")
    logic = _logic(args.logic)
    verdict = rule_valid(SCHEMAS[args.rule], logic)
    payload = {
        "rule": args.rule,
        "logic": logic.value,
        "valid": verdict.valid,
        "countermodel": None if verdict.valid else {k: str(v) for k, v in sorted(verdict.countermodel.items())},
    }
    _emit(args, payload, str(verdict))
    return EXIT_OK


def cmd_solve(args) -> int:
    doc = _load(args.file)
    logic = _logic(args.logic)
    try:
        solutions = solve_definitions(doc.definitions, logic, args.mode, _valuation(args.valuation))
    except SemanticsError as e:
        raise UsageError(str(e)) from None
    payload = {
        "file": args.file,
        "logic": logic.value,
        "mode": args.mode,
        "solutions": [{k: str(v) for k, v in sorted(s.items())} for s in solutions],
    }
    text = "\n".join(format_valuation(s) for s in solutions) if solutions else "no solution"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_matrix(args) -> int:
    names = _split(args.profiles) if args.profiles is not None else list(BUILTIN_PROFILES)
    unknown = [n for n in names if n not in BUILTIN_PROFILES]
    if unknown:
        raise UsageError(f"unknown profile(s): {', '.join(unknown)}")
    report = run_matrix([BUILTIN_PROFILES[n] for n in names])
    payload = report.as_dict()
    text = report.table()
    status = EXIT_OK
    if args.verify:
        problems = report.mismatches(load_expected())
        payload["verify"] = {"ok": not problems, "mismatches": problems}
        text += "\n" + ("verify: OK" if not problems else "verify: MISMATCH\n  " + "\n  ".join(problems))
        status = EXIT_OK if not problems else EXIT_INVALID
    _emit(args, payload, text)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paradoxlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"paradoxlab {__version__}")
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=["text", "machine"], default="text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[fmt], help="check proof scripts under a profile")
    p.add_argument("file")
    p.add_argument("proof", nargs="?")
    p.add_argument("--profile", default="classical")
    p.add_argument("--enable", action=_Toggle, metavar="R1,R2")
    p.add_argument("--disable", action=_Toggle, metavar="R1,R2")
    p.add_argument("--structural", choices=["free", "linear"])
    p.add_argument("--linear-scope", choices=sorted(_SCOPES))
    p.set_defaults(func=cmd_check, toggles=[])

    p = sub.add_parser("audit", parents=[fmt], help="count citations of each assumption")
    p.add_argument("file")
    p.add_argument("proof", nargs="?")
    p.add_argument("--all-lines", action="store_true")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("semantics", help="LP / classical evaluation")
    sem = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    q = sem.add_parser("eval", parents=[fmt], help="evaluate a formula")
    q.add_argument("formula")
    q.add_argument("--valuation", default="")
    q.add_argument("--logic", default="lp")
    q.set_defaults(func=cmd_semantics_eval)
    q = sem.add_parser("rule", parents=[fmt], help="search a rule schema for a countermodel")
    q.add_argument("rule")
    q.add_argument("--logic", default="lp")
    q.set_defaults(func=cmd_semantics_rule)

    p = sub.add_parser("solve", parents=[fmt], help="solve self-referential definitions")
    p.add_argument("file")
    p.add_argument("--logic", default="lp")
    p.add_argument("--mode", choices=["equational", "designated-iff"], default="equational")
    p.add_argument("--valuation", default="", help="values for undefined identifiers")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("matrix", parents=[fmt], help="corpus x profile verdict table")
    p.add_argument("--profiles", help="comma-separated built-in profile names")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_matrix)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "semantics":
        args.command = f"semantics {args.subcommand}"
    try:
        return args.func(args)
    except ScriptError as e:
        for err in e.errors:
            print(f"{getattr(args, 'file', '<input>')}:{err}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as e:
        print(f"<formula>:{e}", file=sys.stderr)
        return EXIT_PARSE
    except UsageError as e:
        print(f"paradoxlab: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
