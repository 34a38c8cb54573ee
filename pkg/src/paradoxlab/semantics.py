"""Three-valued LP and classical evaluation, rule validity and fixed points.

LP uses strong-Kleene tables over ``f < b < t`` with designated values
``{t, b}`` and the material conditional ``~A | B``.  The truth and falsity
predicates are transparent: ``T(A)`` has the value of ``A`` and ``F(A)`` the
value of ``~A``.  ``Val`` has no semantics here.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .core import (
    And,
    Atom,
    Definition,
    FalseOf,
    Falsum,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    SentenceName,
    TrueOf,
    TruthValue,
    ValidOf,
    contains_valid_of,
    identifiers,
)
from .syntax import parse_formula

T, B, F = TruthValue.T, TruthValue.B, TruthValue.F

Valuation = dict[str, TruthValue]


class SemanticsError(ValueError):
    pass


class UnsupportedPredicateError(SemanticsError):
    pass


class IncompleteValuationError(SemanticsError):
    pass


class ValueDomainError(SemanticsError):
    pass


class Logic(enum.Enum):
    LP = "lp"
    CL = "cl"

    @property
    def values(self) -> tuple[TruthValue, ...]:
        # enumeration order is the lattice order f < b < t
        return (F, B, T) if self is Logic.LP else (F, T)

    @property
    def designated(self) -> frozenset[TruthValue]:
        return frozenset({T, B}) if self is Logic.LP else frozenset({T})

    def is_designated(self, v: TruthValue) -> bool:
        return v in self.designated

    @classmethod
    def parse(cls, text: str) -> "Logic":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown logic {text!r} (expected lp or cl)") from None


def neg(v: TruthValue) -> TruthValue:
    return {T: F, B: B, F: T}[v]


def evaluate(f: Formula, valuation: Mapping[str, TruthValue], logic: Logic = Logic.LP) -> TruthValue:
    for key, v in valuation.items():
        if v not in logic.values:
            raise ValueDomainError(f"{key}={v} is not a value of {logic.name}")
    return _eval(f, valuation)


def _eval(f: Formula, v: Mapping[str, TruthValue]) -> TruthValue:
    match f:
        case Atom(name) | SentenceName(name):
            try:
                return v[name]
            except KeyError:
                raise IncompleteValuationError(f"no value for {name}") from None
        case Falsum():
            return F
        case Not(a):
            return neg(_eval(a, v))
        case And(a, b):
            return min(_eval(a, v), _eval(b, v))
        case Or(a, b):
            return max(_eval(a, v), _eval(b, v))
        case Implies(a, b):
            return max(neg(_eval(a, v)), _eval(b, v))
        case Iff(a, b):
            x, y = _eval(a, v), _eval(b, v)
            return min(max(neg(x), y), max(neg(y), x))
        case TrueOf(a):
            return _eval(a, v)
        case FalseOf(a):
            return neg(_eval(a, v))
        case ValidOf():
            raise UnsupportedPredicateError("Val(...) has no truth-functional semantics")
    raise TypeError(f"not a formula: {f!r}")


def valuations(names: Sequence[str], logic: Logic):
    """All valuations of ``names`` in lexicographic order."""
    for combo in itertools.product(logic.values, repeat=len(names)):
        yield dict(zip(names, combo))


@dataclass(frozen=True)
class RuleSchema:
    """A single-conclusion inference pattern over metavariables ``A``, ``B``."""

    name: str
    premises: tuple[Formula, ...]
    conclusion: Formula

    def metavariables(self) -> list[str]:
        return identifiers(self.premises + (self.conclusion,))


@dataclass(frozen=True)
class Verdict:
    countermodel: Optional[Valuation] = None

    @property
    def valid(self) -> bool:
        return self.countermodel is None

    def __str__(self) -> str:
        if self.valid:
            return "valid"
        return "countermodel: " + format_valuation(self.countermodel)


def format_valuation(v: Mapping[str, TruthValue]) -> str:
    return ", ".join(f"{k}={v[k]}" for k in sorted(v))


def rule_valid(schema: RuleSchema, logic: Logic = Logic.LP) -> Verdict:
    """Exhaustive search for a valuation designating every premise but not the conclusion."""
    for v in valuations(schema.metavariables(), logic):
        if all(logic.is_designated(_eval(p, v)) for p in schema.premises) and not logic.is_designated(
            _eval(schema.conclusion, v)
        ):
            return Verdict(v)
    return Verdict()


def _schema(name: str, premises: Sequence[str], conclusion: str) -> RuleSchema:
    return RuleSchema(name, tuple(parse_formula(p) for p in premises), parse_formula(conclusion))


# Propositional schemas for the kernel rules that have one, plus excluded middle.
SCHEMAS: dict[str, RuleSchema] = {
    s.name: s
    for s in [
        _schema("mp", ["A -> B", "A"], "B"),
        _schema("iffmp", ["A <-> B", "A"], "B"),
        _schema("conji", ["A", "B"], "A & B"),
        _schema("disji", ["A"], "A | B"),
        _schema("ds", ["A | B", "~A"], "B"),
        _schema("telim", ["T(A)"], "A"),
        _schema("tintro", ["A"], "T(A)"),
        _schema("rc", ["A -> (A -> B)"], "A -> B"),
        _schema("explode", ["A", "~A"], "B"),
        _schema("lem", [], "A | ~A"),
    ]
}


def solve_definitions(
    definitions: Sequence[Definition],
    logic: Logic = Logic.LP,
    mode: str = "equational",
    fixed: Optional[Mapping[str, TruthValue]] = None,
) -> list[Valuation]:
    """Every assignment to the defined names that respects all definitions.

    ``equational`` demands ``v(name) == v(body)``; ``designated-iff`` only
    that ``name <-> body`` is designated.  Identifiers in the bodies that are
    not defined must be supplied through ``fixed``.
    """
    if mode not in ("equational", "designated-iff"):
        raise ValueError(f"unknown mode {mode!r}")
    fixed = dict(fixed or {})
    for key, v in fixed.items():
        if v not in logic.values:
            raise ValueDomainError(f"{key}={v} is not a value of {logic.name}")
    names = sorted({d.name for d in definitions})
    for d in definitions:
        if contains_valid_of(d.body):
            raise UnsupportedPredicateError(f"definition of {d.name} mentions Val(...)")
        missing = [i for i in identifiers([d.body]) if i not in names and i not in fixed]
        if missing:
            raise IncompleteValuationError(f"unbound identifiers in definition of {d.name}: {', '.join(missing)}")

    solutions = []
    for guess in valuations(names, logic):
        v = {**fixed, **guess}
        if all(_respects(d, v, logic, mode) for d in definitions):
            solutions.append(guess)
    return solutions


def _respects(d: Definition, v: Valuation, logic: Logic, mode: str) -> bool:
    if mode == "equational":
        return v[d.name] == _eval(d.body, v)
    return logic.is_designated(_eval(Iff(SentenceName(d.name), d.body), v))

