"""Proof checking under configurable rule profiles.

A :class:`Profile` is a set of enabled rules plus a structural discipline.
Under ``free`` any visible line may be cited any number of times.  Under
``linear`` each metered line may be cited at most once (``assumptions-only``
meters subproof assumptions, ``all-lines`` meters every line) and each
subproof may be discharged at most once.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import (
    And,
    Definition,
    DefinitionKind,
    FalseOf,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    SentenceName,
    SubstitutionError,
    TrueOf,
    ValidOf,
    occurrences,
    substitute_name,
)
from .rules import GUARDED, RULES, SIGNATURES
from .syntax import (
    Assume,
    Derived,
    Justification,
    ProofScript,
    Subproof,
    citation_kinds,
    print_formula,
    walk,
)

FREE, LINEAR = "free", "linear"
ASSUMPTIONS_ONLY, ALL_LINES = "assumptions-only", "all-lines"


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class Profile:
    enabled: frozenset[str]
    structural: str = FREE
    linear_scope: str = ASSUMPTIONS_ONLY
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if self.structural not in (FREE, LINEAR):
            raise ProfileError(f"structural must be free or linear, not {self.structural!r}")
        if self.linear_scope not in (ASSUMPTIONS_ONLY, ALL_LINES):
            raise ProfileError(f"linear scope must be assumptions-only or all-lines, not {self.linear_scope!r}")
        unknown = set(self.enabled) - set(RULES)
        if unknown:
            raise ProfileError(f"unknown rule(s): {', '.join(sorted(unknown))}")
        # premise and reit are always on
        object.__setattr__(self, "enabled", frozenset(self.enabled) | GUARDED)

    def allows(self, rule: str) -> bool:
        return rule in self.enabled

    def __le__(self, other: "Profile") -> bool:
        """``self ⊑ other``: every proof valid under ``self`` is valid under ``other``."""
        if not self.enabled <= other.enabled:
            return False
        if other.structural == FREE:
            return True
        if self.structural == FREE:
            return False
        return other.linear_scope == ASSUMPTIONS_ONLY or self.linear_scope == ALL_LINES

    def describe(self) -> dict:
        return {
            "name": self.name,
            "enabled": [r for r in RULES if r in self.enabled],
            "structural": self.structural,
            "linear_scope": self.linear_scope,
        }


def _all_but(*rules: str) -> frozenset[str]:
    return frozenset(RULES) - set(rules)


BUILTIN_PROFILES: dict[str, Profile] = {
    "classical": Profile(_all_but(), FREE, name="classical"),
    "dialetheic": Profile(_all_but("ds", "explode"), FREE, name="dialetheic"),
    "substructural": Profile(_all_but("rc"), LINEAR, ASSUMPTIONS_ONLY, name="substructural"),
    "dialetheic-substructural": Profile(
        _all_but("ds", "explode", "rc"), LINEAR, ASSUMPTIONS_ONLY, name="dialetheic-substructural"
    ),
    "no-dt": Profile(_all_but("cp"), FREE, name="no-dt"),
}

CLASSICAL = BUILTIN_PROFILES["classical"]


def build_profile(
    base: Optional[str] = None,
    enable: Iterable[str] = (),
    disable: Iterable[str] = (),
    structural: Optional[str] = None,
    scope: Optional[str] = None,
) -> Profile:
    """Start from a built-in profile (classical by default) and apply toggles."""
    enable, disable = set(enable), set(disable)
    if base is None or base == "":
        base = "classical"
    if base not in BUILTIN_PROFILES:
        raise ProfileError(f"unknown profile {base!r} (known: {', '.join(BUILTIN_PROFILES)})")
    unknown = (enable | disable) - set(RULES)
    if unknown:
        raise ProfileError(f"unknown rule(s): {', '.join(sorted(unknown))}")
    if enable & disable:
        raise ProfileError(f"rule(s) both enabled and disabled: {', '.join(sorted(enable & disable))}")
    if disable & GUARDED:
        raise ProfileError(f"cannot disable {', '.join(sorted(disable & GUARDED))}")
    start = BUILTIN_PROFILES[base]
    toggled = bool(enable - start.enabled or disable & start.enabled)
    toggled |= structural not in (None, start.structural) or scope not in (None, start.linear_scope)
    return Profile(
        (start.enabled | enable) - disable,
        structural or start.structural,
        scope or start.linear_scope,
        name=base + ("*" if toggled else ""),
    )


# Results


@dataclass(frozen=True)
class Failure:
    kind: str
    message: str

    def __str__(self) -> str:
        return self.message


@dataclass(frozen=True)
class Usage:
    label: str
    kind: str  # assumption | line | subproof
    cited_by: tuple[str, ...]

    @property
    def count(self) -> int:
        return len(self.cited_by)

    def __str__(self) -> str:
        noun = "use" if self.count == 1 else "uses"
        refs = f" ({', '.join(self.cited_by)})" if self.cited_by else ""
        return f"{self.label}: {self.count} {noun}{refs}"


@dataclass(frozen=True)
class UsageReport:
    scope: str
    entries: tuple[Usage, ...]

    def __getitem__(self, label: str) -> Usage:
        for u in self.entries:
            if u.label == label:
                return u
        raise KeyError(label)

    def __contains__(self, label: str) -> bool:
        return any(u.label == label for u in self.entries)

    @property
    def contraction_points(self) -> list[str]:
        return [u.label for u in self.entries if u.count >= 2]

    def as_dict(self) -> dict:
        return {
            "scope": self.scope,
            "entries": [
                {"label": u.label, "kind": u.kind, "count": u.count, "cited_by": list(u.cited_by)}
                for u in self.entries
            ],
            "contraction_points": self.contraction_points,
        }


@dataclass(frozen=True)
class Sequent:
    hypotheses: tuple[Formula, ...]
    conclusion: Formula

    def __str__(self) -> str:
        hyps = ", ".join(print_formula(h) for h in self.hypotheses)
        return f"{hyps} |- {print_formula(self.conclusion)}".lstrip()


@dataclass(frozen=True)
class CheckResult:
    proof: str
    profile: Profile
    lines: tuple[tuple[str, Optional[Failure]], ...]
    usage: UsageReport
    established: Optional[Sequent]

    @property
    def valid(self) -> bool:
        return self.established is not None

    @property
    def verdict(self) -> str:
        return "valid" if self.valid else "invalid"

    @property
    def first_failure(self) -> Optional[tuple[str, Failure]]:
        for label, failure in self.lines:
            if failure is not None:
                return label, failure
        return None

    def as_dict(self) -> dict:
        first = self.first_failure
        return {
            "proof": self.proof,
            "verdict": self.verdict,
            "established": None if self.established is None else str(self.established),
            "lines": [
                {"label": label, "ok": f is None, "reason": None if f is None else f.kind,
                 "message": None if f is None else f.message}
                for label, f in self.lines
            ],
            "first_failure": None if first is None else
            {"label": first[0], "reason": first[1].kind, "message": first[1].message},
            "usage": self.usage.as_dict(),
        }


# Checking


class _Mismatch(Exception):
    pass


def _need(condition: bool, message: str) -> None:
    if not condition:
        raise _Mismatch(message)


def check_proof(
    proof: ProofScript,
    definitions: Sequence[Definition] = (),
    profile: Profile = CLASSICAL,
) -> CheckResult:
    """Check every line of ``proof`` and the structural discipline of ``profile``.

    Never raises on a malformed proof; all problems end up in the per-line
    results.
    """
    defs = {d.name: d for d in definitions}
    rows: list[list] = []  # [label, failure]
    row_of: dict[str, int] = {}
    kinds: dict[str, str] = {}
    order: list[str] = []
    cited_by: dict[str, list[str]] = {}

    for step, scope, depth, index in walk(proof):
        if isinstance(step, Subproof):
            if step.block_id not in kinds:
                kinds[step.block_id] = "subproof"
                order.append(step.block_id)
            continue
        failure = None
        if step.label in kinds:
            failure = Failure("duplicate-label", f"duplicate label {step.label}")
        else:
            kinds[step.label] = "assumption" if isinstance(step, Assume) else "line"
            order.append(step.label)
            row_of[step.label] = len(rows)
        if isinstance(step, Assume):
            if depth == 0 or index != 0:
                failure = failure or Failure("malformed-subproof", f"'assume' at {step.label} must open a subproof")
        else:
            found = _check_derived(step, scope, defs, proof, profile, cited_by)
            failure = failure or found
        rows.append([step.label, failure])

    metered = []
    if profile.structural == LINEAR:
        for key in order:
            kind = kinds[key]
            if kind == "subproof" or profile.linear_scope == ALL_LINES or kind == "assumption":
                metered.append(key)
    for key in metered:
        users = cited_by.get(key, [])
        if len(users) < 2:
            continue
        if kinds[key] == "subproof":
            message = f"subproof {key} discharged {len(users)} times ({', '.join(users)})"
            for user in users[1:]:
                _fail(rows, row_of.get(user), Failure("contraction", message))
        else:
            message = f"{kinds[key]} {key} cited {len(users)} times ({', '.join(users)})"
            _fail(rows, row_of.get(key), Failure("contraction", message))

    last = proof.steps[-1] if proof.steps else None
    if last is None or isinstance(last, Subproof) or last.formula != proof.conclusion:
        shown = "nothing" if last is None or isinstance(last, Subproof) else print_formula(last.formula)
        rows.append(["qed", Failure(
            "conclusion-mismatch",
            f"qed {print_formula(proof.conclusion)} does not match the last top-level line ({shown})",
        )])

    lines = tuple((label, failure) for label, failure in rows)
    ok = all(f is None for _, f in lines)
    usage = _usage_report(order, kinds, cited_by, profile.linear_scope)
    return CheckResult(
        proof.name,
        profile,
        lines,
        usage,
        Sequent(proof.hypotheses, proof.conclusion) if ok else None,
    )


def _fail(rows, index, failure):
    if index is not None and rows[index][1] is None:
        rows[index][1] = failure


def _usage_report(order, kinds, cited_by, scope) -> UsageReport:
    entries = tuple(
        Usage(key, kinds[key], tuple(cited_by.get(key, ())))
        for key in order
        if scope == ALL_LINES or kinds[key] == "assumption"
    )
    return UsageReport(scope, entries)


def audit_resources(proof: ProofScript, scope: str = ASSUMPTIONS_ONLY) -> UsageReport:
    """Profile-independent census of how often each line is cited."""
    return check_proof(proof, (), Profile(frozenset(RULES), FREE, scope, name="audit")).usage


def _check_derived(step: Derived, scope, defs, proof, profile, cited_by) -> Optional[Failure]:
    j = step.justification
    if j.rule not in SIGNATURES:
        return Failure("unknown-rule", f"unknown rule {j.rule}")

    # resolve citations first so the census counts them whatever the verdict
    resolved = []
    problem = None
    for ref, kind in zip(j.cited, citation_kinds(j)):
        issue = scope.problem(ref, kind)
        if issue is None:
            target = scope.line(ref) if kind == "line" else scope.block(ref)
            resolved.append(target)
            cited_by.setdefault(ref, []).append(step.label)
        elif problem is None:
            problem = Failure(*issue)

    if not profile.allows(j.rule):
        return Failure("rule-disabled", f"rule-disabled({j.rule})")
    if problem is not None:
        return problem
    arity = _arity_problem(j)
    if arity is not None:
        return arity
    try:
        _SCHEMAS[j.rule](step.formula, resolved, j, defs, proof)
    except _Mismatch as e:
        return Failure("schema-mismatch", f"{j.rule}: {e}")
    except _DefinitionProblem as e:
        return Failure(e.kind, str(e))
    return None


def _arity_problem(j: Justification) -> Optional[Failure]:
    sig = SIGNATURES[j.rule]
    refs = [k for k in sig if k.rstrip("?") in ("line", "block")]
    if len(j.cited) != len(refs):
        return Failure("bad-arity", f"{j.rule} cites {len(refs)} item(s), got {len(j.cited)}")
    if "name" in sig and j.name is None:
        return Failure("bad-arity", f"{j.rule} needs a sentence name")
    return None


class _DefinitionProblem(Exception):
    def __init__(self, kind, message):
        super().__init__(message)
        self.kind = kind


def _definition(defs, name, kind: DefinitionKind) -> Definition:
    if name not in defs:
        raise _DefinitionProblem("unknown-definition", f"no definition for {name}")
    d = defs[name]
    if d.kind is not kind:
        raise _DefinitionProblem("kind-error", f"{name} is a {d.kind.value} definition; rule needs {kind.value}")
    return d


def _forms(cited) -> list[Formula]:
    return [c.formula for c in cited]


def _either_order(pair, test) -> bool:
    x, y = pair
    return test(x, y) or test(y, x)


def _premise(f, cited, j, defs, proof):
    _need(f in proof.hypotheses, f"{print_formula(f)} is not a declared hypothesis")


def _reit(f, cited, j, defs, proof):
    _need(f == cited[0].formula, "restated formula differs from the cited line")


def _defbi(f, cited, j, defs, proof):
    d = _definition(defs, j.name, DefinitionKind.BICONDITIONAL)
    _need(f == d.as_biconditional(), f"expected {print_formula(d.as_biconditional())}")


def _mp(f, cited, j, defs, proof):
    _need(_either_order(_forms(cited), lambda x, y: x == Implies(y, f)), "needs A -> B and A to infer B")


def _iffmp(f, cited, j, defs, proof):
    def test(x, y):
        return isinstance(x, Iff) and ((y == x.left and f == x.right) or (y == x.right and f == x.left))

    _need(_either_order(_forms(cited), test), "needs A <-> B and one side to infer the other")


def _conji(f, cited, j, defs, proof):
    _need(_either_order(_forms(cited), lambda x, y: f == And(x, y)), "needs A and B to infer A & B")


def _disji(f, cited, j, defs, proof):
    x = cited[0].formula
    _need(isinstance(f, Or) and x in (f.left, f.right), "needs A to infer A | B or B | A")


def _ds(f, cited, j, defs, proof):
    def test(x, y):
        return isinstance(x, Or) and (
            (y == Not(x.left) and f == x.right) or (y == Not(x.right) and f == x.left)
        )

    _need(_either_order(_forms(cited), test), "needs A | B and ~A to infer B")


def _explode(f, cited, j, defs, proof):
    _need(_either_order(_forms(cited), lambda x, y: y == Not(x)), "needs A and ~A")


def _telim(f, cited, j, defs, proof):
    _need(cited[0].formula == TrueOf(f), "needs T(A) to infer A")


def _tintro(f, cited, j, defs, proof):
    _need(f == TrueOf(cited[0].formula), "needs A to infer T(A)")


def _valelim(f, cited, j, defs, proof):
    x = cited[0].formula
    _need(isinstance(x, ValidOf) and f == Implies(x.premise, x.conclusion), "needs Val(A, B) to infer A -> B")


def _rc(f, cited, j, defs, proof):
    x = cited[0].formula
    _need(
        isinstance(x, Implies) and isinstance(x.right, Implies) and x.left == x.right.left
        and f == Implies(x.left, x.right.right),
        "needs A -> (A -> B) to infer A -> B",
    )


def _block_ends(block: Subproof) -> tuple[Formula, Formula]:
    _need(block.assumption is not None, f"subproof {block.block_id} has no assumption")
    _need(block.final is not None, f"subproof {block.block_id} does not end in a line")
    return block.assumption, block.final


def _cp(f, cited, j, defs, proof):
    a, b = _block_ends(cited[0])
    _need(f == Implies(a, b), f"subproof proves {print_formula(b)} from {print_formula(a)}")


def _valintro(f, cited, j, defs, proof):
    a, b = _block_ends(cited[0])
    _need(f == ValidOf(a, b), f"subproof proves {print_formula(b)} from {print_formula(a)}")


def _bivalence(f, cited, j, defs, proof):
    name = SentenceName(j.name)
    (a1, d1), (a2, d2) = (_block_ends(b) for b in cited)
    _need({a1, a2} == {TrueOf(name), FalseOf(name)} and a1 != a2,
          f"cases must assume T({j.name}) and F({j.name})")
    _need(d1 == d2, "the two cases end in different formulas")
    _need(f == d1, "conclusion differs from the cases' common result")


# Subsets beyond this many occurrences are not enumerated; only "all" is tried.
_MAX_SUBSET_OCCURRENCES = 10


def _subst(f, cited, j, defs, proof):
    d = _definition(defs, j.name, DefinitionKind.IDENTITY)
    source = cited[0].formula
    directions = (j.direction,) if j.direction else ("unfold", "fold")
    for direction in directions:
        target = SentenceName(d.name) if direction == "unfold" else d.body
        spots = occurrences(source, target)
        if not spots:
            continue
        if len(spots) > _MAX_SUBSET_OCCURRENCES:
            choices = [spots]
        else:
            choices = (list(c) for n in range(1, len(spots) + 1) for c in combinations(spots, n))
        for chosen in choices:
            try:
                if substitute_name(source, d, direction, chosen) == f:
                    return
            except SubstitutionError:
                continue
    how = j.direction or "unfold/fold"
    raise _Mismatch(f"{print_formula(f)} is not a {how} of {d.name} in {print_formula(source)}")


_SCHEMAS = {
    "premise": _premise,
    "reit": _reit,
    "defbi": _defbi,
    "mp": _mp,
    "iffmp": _iffmp,
    "cp": _cp,
    "conji": _conji,
    "disji": _disji,
    "ds": _ds,
    "telim": _telim,
    "tintro": _tintro,
    "subst": _subst,
    "valintro": _valintro,
    "valelim": _valelim,
    "bivalence": _bivalence,
    "rc": _rc,
    "explode": _explode,
}
