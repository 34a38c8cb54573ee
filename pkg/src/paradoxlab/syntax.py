"""Concrete syntax: formulas, definitions and Fitch-style proof scripts.

Formula grammar, loosest to tightest::

    iff     := imp ("<->" imp)?          # non-associative
    imp     := or ("->" imp)?            # right-associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | primary
    primary := "bot" | IDENT | "(" iff ")" | "T(" iff ")" | "F(" iff ")"
             | "Val(" iff "," iff ")"

Lowercase-initial identifiers are atoms, uppercase-initial ones sentence
names.  Unicode ``¬ ∧ ∨ → ↔ ⊥`` are accepted on input; output is ASCII.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .core import (
    And,
    Atom,
    Definition,
    DefinitionKind,
    FalseOf,
    Falsum,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    SentenceName,
    TrueOf,
    ValidOf,
)
from .rules import DIRECTIONS, SIGNATURES, arity_range


class ParseError(Exception):
    """A located syntax or scoping problem."""

    def __init__(self, message, line=1, column=1, expected=(), kind="syntax"):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        self.kind = kind

    def __str__(self):
        text = f"line {self.line}, column {self.column}: {self.message}"
        if self.expected:
            text += " (expected " + ", ".join(sorted(self.expected)) + ")"
        return text

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "line": self.line,
            "column": self.column,
            "message": self.message,
            "expected": sorted(self.expected),
        }


class ScriptError(Exception):
    """All problems found in a proof-script document."""

    def __init__(self, errors: list[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


# ---------------------------------------------------------------------------
# Formulas

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<iff><->|↔)
  | (?P<imp>->|→)
  | (?P<not>~|¬|∼)
  | (?P<and>&|∧)
  | (?P<or>\||∨)
  | (?P<bot>⊥)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_SHOW = {
    "iff": "'<->'",
    "imp": "'->'",
    "not": "'~'",
    "and": "'&'",
    "or": "'|'",
    "bot": "'bot'",
    "lparen": "'('",
    "rparen": "')'",
    "comma": "','",
    "ident": "identifier",
    "eof": "end of input",
}

_FORMULA_START = frozenset({"formula"})


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(text: str, line: int, column: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, column + pos, _FORMULA_START
            )
        kind = m.lastgroup
        if kind != "ws":
            if kind == "ident" and m.group() == "bot":
                kind = "bot"
            tokens.append(_Token(kind, m.group(), column + pos))
        pos = m.end()
    tokens.append(_Token("eof", "", column + len(text)))
    return tokens


class _FormulaParser:
    def __init__(self, text: str, line: int = 1, column: int = 1):
        self.line = line
        self.tokens = _tokenize(text, line, column)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def fail(self, message: str, expected) -> ParseError:
        return ParseError(message, self.line, self.tok.column, expected)

    def expect(self, kind: str) -> _Token:
        tok = self.tok
        if tok.kind != kind:
            found = repr(tok.text) if tok.text else "end of input"
            raise self.fail(f"unexpected {found}", {_SHOW[kind]})
        self.pos += 1
        return tok

    def parse_iff(self) -> Formula:
        left = self.parse_imp()
        if self.tok.kind == "iff":
            self.pos += 1
            right = self.parse_imp()
            if self.tok.kind == "iff":
                raise self.fail("'<->' does not chain; add parentheses", {"')'", "end of input"})
            return Iff(left, right)
        return left

    def parse_imp(self) -> Formula:
        left = self.parse_or()
        if self.tok.kind == "imp":
            self.pos += 1
            return Implies(left, self.parse_imp())
        return left

    def parse_or(self) -> Formula:
        f = self.parse_and()
        while self.tok.kind == "or":
            self.pos += 1
            f = Or(f, self.parse_and())
        return f

    def parse_and(self) -> Formula:
        f = self.parse_unary()
        while self.tok.kind == "and":
            self.pos += 1
            f = And(f, self.parse_unary())
        return f

    def parse_unary(self) -> Formula:
        if self.tok.kind == "not":
            self.pos += 1
            return Not(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        tok = self.tok
        if tok.kind == "bot":
            self.pos += 1
            return Falsum()
        if tok.kind == "lparen":
            self.pos += 1
            f = self.parse_iff()
            self.expect("rparen")
            return f
        if tok.kind == "ident":
            self.pos += 1
            is_call = self.tok.kind == "lparen"
            if is_call and tok.text in ("T", "F"):
                self.pos += 1
                inner = self.parse_iff()
                self.expect("rparen")
                return TrueOf(inner) if tok.text == "T" else FalseOf(inner)
            if is_call and tok.text == "Val":
                self.pos += 1
                premise = self.parse_iff()
                self.expect("comma")
                conclusion = self.parse_iff()
                self.expect("rparen")
                return ValidOf(premise, conclusion)
            if tok.text[0].isupper():
                return SentenceName(tok.text)
            return Atom(tok.text)
        found = repr(tok.text) if tok.text else "end of input"
        raise self.fail(f"unexpected {found}", _FORMULA_START)

    def finish(self, expected=("end of input",)):
        if self.tok.kind != "eof":
            found = repr(self.tok.text)
            raise self.fail(f"unexpected {found}", set(expected) | {"operator"})


def parse_formula(text: str, line: int = 1, column: int = 1) -> Formula:
    """Parse one formula; raises :class:`ParseError` with its location."""
    p = _FormulaParser(text, line, column)
    f = p.parse_iff()
    p.finish()
    return f


def parse_formula_list(text: str, line: int = 1, column: int = 1) -> list[Formula]:
    """Parse ``f1, f2, ...`` where commas inside ``Val(...)`` do not split."""
    p = _FormulaParser(text, line, column)
    out = [p.parse_iff()]
    while p.tok.kind == "comma":
        p.pos += 1
        out.append(p.parse_iff())
    p.finish(("','", "end of input"))
    return out


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 6)


def print_formula(f: Formula) -> str:
    """ASCII rendering that re-parses to the same tree."""

    def wrap(g: Formula, minimum: int) -> str:
        s = print_formula(g)
        return f"({s})" if _prec(g) < minimum else s

    match f:
        case Atom(name) | SentenceName(name):
            return name
        case Falsum():
            return "bot"
        case Not(a):
            return "~" + wrap(a, 5)
        case And(a, b):
            return f"{wrap(a, 4)} & {wrap(b, 5)}"
        case Or(a, b):
            return f"{wrap(a, 3)} | {wrap(b, 4)}"
        case Implies(a, b):
            return f"{wrap(a, 3)} -> {wrap(b, 2)}"
        case Iff(a, b):
            # conditionals under <-> keep their parentheses for readability
            return f"{wrap(a, 3)} <-> {wrap(b, 3)}"
        case TrueOf(a):
            return f"T({print_formula(a)})"
        case FalseOf(a):
            return f"F({print_formula(a)})"
        case ValidOf(a, b):
            return f"Val({print_formula(a)}, {print_formula(b)})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Proof scripts


@dataclass(frozen=True)
class Justification:
    rule: str
    cited: tuple[str, ...] = ()
    name: Optional[str] = None
    direction: Optional[str] = None

    def args(self) -> list[str]:
        """Arguments in the order the rule's signature lists them."""
        cited = iter(self.cited)
        out = []
        for kind in SIGNATURES.get(self.rule, ("line",) * len(self.cited)):
            kind = kind.rstrip("?")
            if kind in ("line", "block"):
                ref = next(cited, None)
                if ref is not None:
                    out.append(ref)
            elif kind == "name" and self.name is not None:
                out.append(self.name)
            elif kind == "dir" and self.direction is not None:
                out.append(self.direction)
        out.extend(cited)
        return out

    def __str__(self) -> str:
        args = self.args()
        return self.rule + (" " + ", ".join(args) if args else "")


@dataclass(frozen=True)
class Assume:
    label: str
    formula: Formula
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Derived:
    label: str
    formula: Formula
    justification: Justification
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Subproof:
    block_id: str
    steps: tuple["Step", ...]
    line: int = field(default=0, compare=False)

    @property
    def assumption(self) -> Optional[Formula]:
        if self.steps and isinstance(self.steps[0], Assume):
            return self.steps[0].formula
        return None

    @property
    def final(self) -> Optional[Formula]:
        if self.steps and not isinstance(self.steps[-1], Subproof):
            return self.steps[-1].formula
        return None


Step = Union[Assume, Derived, Subproof]


@dataclass(frozen=True)
class ProofScript:
    name: str
    hypotheses: tuple[Formula, ...]
    steps: tuple[Step, ...]
    conclusion: Formula
    line: int = field(default=0, compare=False)

    def labels(self) -> list[str]:
        return [s.label for s in iter_steps(self.steps) if not isinstance(s, Subproof)]

    def block_ids(self) -> list[str]:
        return [s.block_id for s in iter_steps(self.steps) if isinstance(s, Subproof)]

    def step(self, label: str) -> Step:
        for s in iter_steps(self.steps):
            if getattr(s, "label", None) == label or getattr(s, "block_id", None) == label:
                return s
        raise KeyError(label)


@dataclass(frozen=True)
class Document:
    definitions: tuple[Definition, ...] = ()
    proofs: tuple[ProofScript, ...] = ()

    def definition(self, name: str) -> Definition:
        for d in self.definitions:
            if d.name == name:
                return d
        raise KeyError(name)

    def proof(self, name: str) -> ProofScript:
        for p in self.proofs:
            if p.name == name:
                return p
        raise KeyError(name)


def iter_steps(steps) -> Iterator[Step]:
    """Every step in document order, subproofs before their contents."""
    for s in steps:
        yield s
        if isinstance(s, Subproof):
            yield from iter_steps(s.steps)


# Scope walking, shared by the parser's citation check and the kernel.


class Scope:
    """Labels and closed blocks visible at one point of a proof."""

    def __init__(self, proof: ProofScript):
        self._frames: list[tuple[dict, dict]] = [({}, {})]
        self.all_lines = set(proof.labels())
        self.all_blocks = set(proof.block_ids())

    def line(self, ref: str) -> Optional[Union[Assume, Derived]]:
        for lines, _ in reversed(self._frames):
            if ref in lines:
                return lines[ref]
        return None

    def block(self, ref: str) -> Optional[Subproof]:
        for _, blocks in reversed(self._frames):
            if ref in blocks:
                return blocks[ref]
        return None

    def problem(self, ref: str, kind: str) -> Optional[tuple[str, str]]:
        """``None`` if ``ref`` resolves to a visible ``kind``, else ``(error-kind, message)``."""
        if kind == "line":
            if self.line(ref) is not None:
                return None
            if ref in self.all_lines:
                return "out-of-scope", f"citation {ref} is out of scope"
            if ref in self.all_blocks:
                return "wrong-reference", f"{ref} is a subproof, not a line"
        else:
            if self.block(ref) is not None:
                return None
            if ref in self.all_blocks:
                return "out-of-scope", f"subproof {ref} is out of scope"
            if ref in self.all_lines:
                return "wrong-reference", f"{ref} is a line, not a subproof"
        return "unknown-reference", f"unknown reference {ref}"


def walk(proof: ProofScript) -> Iterator[tuple[Step, Scope, int, int]]:
    """Yield ``(step, scope, depth, index)`` with ``scope`` as seen by ``step``.

    The scope object is mutated as the walk proceeds, so consume it before
    advancing the iterator.
    """
    scope = Scope(proof)

    def visit(steps, depth):
        for index, step in enumerate(steps):
            yield step, scope, depth, index
            lines, blocks = scope._frames[-1]
            if isinstance(step, Subproof):
                scope._frames.append(({}, {}))
                yield from visit(step.steps, depth + 1)
                scope._frames.pop()
                blocks[step.block_id] = step
            else:
                lines[step.label] = step

    yield from visit(proof.steps, 0)


def citation_kinds(j: Justification) -> list[str]:
    """The reference kind ("line" or "block") expected for each cited item."""
    kinds = [k.rstrip("?") for k in SIGNATURES.get(j.rule, ()) if k.rstrip("?") in ("line", "block")]
    return kinds + ["line"] * (len(j.cited) - len(kinds))


# Line-oriented script reader

_LABEL = r"[A-Za-z0-9_]+(?:\.[A-Za-z0-9_]+)*"
_LABEL_RE = re.compile(_LABEL + r"$")
_NAME_RE = re.compile(r"[A-Z][A-Za-z0-9_]*$")
_IDENT = r"[A-Za-z_][A-Za-z0-9_-]*"
_DEF_RE = re.compile(r"def\s+(?P<name>\S+)\s*(?P<op>:=|<=>)\s*(?P<body>.*)$")
_PROOF_RE = re.compile(r"proof\s+(?P<name>" + _IDENT + r")(?:\s+from\s+(?P<hyps>.*\S))?\s*$")
_SUB_RE = re.compile(r"sub\s+(?P<id>" + _IDENT + r")\s*$")
_STEP_RE = re.compile(r"(?P<label>" + _LABEL + r")\s*:(?!=)\s*(?P<rest>.*)$")
_ASSUME_RE = re.compile(r"assume(?:\s+|$)")


def _strip_comment(text: str) -> str:
    i = text.find("#")
    return text if i < 0 else text[:i]


class _ScriptReader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.errors: list[ParseError] = []
        self.i = 0

    def error(self, message, line, column=1, expected=(), kind="syntax"):
        self.errors.append(ParseError(message, line, column, expected, kind))

    def formula(self, text: str, line: int, column: int) -> Formula:
        try:
            return parse_formula(text, line, column)
        except ParseError as e:
            self.errors.append(e)
            return Falsum()

    def next_line(self) -> Optional[tuple[int, str, int]]:
        """Next non-blank line as ``(line number, stripped text, column of text)``."""
        while self.i < len(self.lines):
            raw = _strip_comment(self.lines[self.i])
            self.i += 1
            body = raw.strip()
            if body:
                return self.i, body.rstrip(), len(raw) - len(raw.lstrip()) + 1
        return None

    def read(self) -> Document:
        definitions: list[Definition] = []
        proofs: list[ProofScript] = []
        while (item := self.next_line()) is not None:
            lineno, text, col = item
            head = text.split(None, 1)[0]
            if head == "def":
                d = self.definition(lineno, text, col)
                if d is None:
                    continue
                if any(x.name == d.name for x in definitions):
                    self.error(f"duplicate definition of {d.name}", lineno, col, kind="duplicate-definition")
                else:
                    definitions.append(d)
            elif head == "proof":
                p = self.proof(lineno, text, col)
                if p is None:
                    continue
                if any(x.name == p.name for x in proofs):
                    self.error(f"duplicate proof name {p.name}", lineno, col, kind="duplicate-proof")
                else:
                    proofs.append(p)
            else:
                self.error(f"unexpected {head!r}", lineno, col, {"'def'", "'proof'"})
        return Document(tuple(definitions), tuple(proofs))

    def definition(self, lineno, text, col) -> Optional[Definition]:
        m = _DEF_RE.match(text)
        if m is None:
            self.error("malformed definition", lineno, col, {"def NAME := formula", "def NAME <=> formula"})
            return None
        name = m.group("name")
        if not _NAME_RE.match(name):
            self.error(f"definition name {name!r} must start uppercase", lineno, col + m.start("name"), {"sentence name"})
            return None
        kind = DefinitionKind.IDENTITY if m.group("op") == ":=" else DefinitionKind.BICONDITIONAL
        body = self.formula(m.group("body"), lineno, col + m.start("body"))
        return Definition(name, body, kind)

    def proof(self, lineno, text, col) -> Optional[ProofScript]:
        m = _PROOF_RE.match(text)
        if m is None:
            self.error("malformed proof header", lineno, col, {"proof NAME", "proof NAME from formula, ..."})
            # skip to the matching qed so its body is not read as top-level junk
            while (item := self.next_line()) is not None and not item[1].startswith("qed"):
                pass
            return None
        hyps: list[Formula] = []
        if m.group("hyps"):
            try:
                hyps = parse_formula_list(m.group("hyps"), lineno, col + m.start("hyps"))
            except ParseError as e:
                self.errors.append(e)

        # stack of (block id, steps, line) for open `sub` blocks; the root has id None
        stack: list[tuple[Optional[str], list, int]] = [(None, [], lineno)]
        conclusion: Optional[Formula] = None
        while True:
            item = self.next_line()
            if item is None:
                self.error(f"proof {m.group('name')} is missing 'qed'", len(self.lines) or 1, 1, {"'qed'"}, "structure")
                break
            ln, body, c = item
            head = body.split(None, 1)[0]
            if head == "qed":
                conclusion = self.formula(body[3:], ln, c + 3)
                break
            if head in ("def", "proof"):
                self.error(f"proof {m.group('name')} is missing 'qed'", ln, c, {"'qed'"}, "structure")
                self.i -= 1
                break
            if head == "sub":
                sm = _SUB_RE.match(body)
                if sm is None:
                    self.error("malformed subproof header", ln, c, {"sub IDENT"})
                    stack.append(("?", [], ln))
                else:
                    stack.append((sm.group("id"), [], ln))
                continue
            if head == "end" and body == "end":
                if len(stack) == 1:
                    self.error("'end' without an open subproof", ln, c, kind="structure")
                else:
                    bid, steps, bln = stack.pop()
                    stack[-1][1].append(Subproof(bid, tuple(steps), bln))
                continue
            step = self.step(ln, body, c)
            if step is not None:
                stack[-1][1].append(step)
        while len(stack) > 1:
            bid, steps, bln = stack.pop()
            self.error(f"subproof {bid} is never closed", bln, 1, {"'end'"}, "structure")
            stack[-1][1].append(Subproof(bid, tuple(steps), bln))

        proof = ProofScript(m.group("name"), tuple(hyps), tuple(stack[0][1]), conclusion or Falsum(), lineno)
        # citation errors are reported even when some lines failed to parse
        self.check_structure(proof)
        return proof

    def step(self, ln, body, c) -> Optional[Step]:
        m = _STEP_RE.match(body)
        if m is None:
            self.error(f"unexpected {body.split(None, 1)[0]!r}", ln, c, {"LABEL ':'", "'sub'", "'end'", "'qed'"})
            return None
        label = m.group("label")
        rest = m.group("rest")
        rest_col = c + m.start("rest")
        am = _ASSUME_RE.match(rest)
        if am:
            return Assume(label, self.formula(rest[am.end():], ln, rest_col + am.end()), ln)
        open_at = rest.rfind("[")
        if open_at < 0 or not rest.endswith("]"):
            self.error("missing justification", ln, rest_col + len(rest), {"'['"})
            return Derived(label, self.formula(rest, ln, rest_col), Justification("reit"), ln)
        formula = self.formula(rest[:open_at], ln, rest_col)
        just = self.justification(rest[open_at + 1 : -1], ln, rest_col + open_at + 1)
        return Derived(label, formula, just, ln)

    def justification(self, text: str, ln: int, col: int) -> Justification:
        parts = text.strip().split(None, 1)
        if not parts:
            self.error("empty justification", ln, col, {"rule name"})
            return Justification("reit")
        rule = parts[0]
        if rule not in SIGNATURES:
            self.error(f"unknown rule {rule!r}", ln, col + text.find(rule), {"rule name"}, "unknown-rule")
            return Justification("reit")
        args = [a.strip() for a in parts[1].split(",")] if len(parts) > 1 else []
        lo, hi = arity_range(rule)
        if not lo <= len(args) <= hi:
            want = str(lo) if lo == hi else f"{lo}-{hi}"
            self.error(f"{rule} takes {want} arguments, got {len(args)}", ln, col, kind="bad-arity")
            return Justification(rule, tuple(a for a in args if _LABEL_RE.match(a)))
        cited: list[str] = []
        name = direction = None
        for kind, arg in zip(SIGNATURES[rule], args):
            kind = kind.rstrip("?")
            if kind in ("line", "block"):
                if not _LABEL_RE.match(arg):
                    self.error(f"bad reference {arg!r}", ln, col, {"label"})
                cited.append(arg)
            elif kind == "name":
                if not _NAME_RE.match(arg):
                    self.error(f"bad sentence name {arg!r}", ln, col, {"sentence name"})
                name = arg
            elif kind == "dir":
                if arg not in DIRECTIONS:
                    self.error(f"bad direction {arg!r}", ln, col, {"'unfold'", "'fold'"})
                direction = arg
        return Justification(rule, tuple(cited), name, direction)

    def check_structure(self, proof: ProofScript) -> None:
        seen: set[str] = set()
        for step, scope, depth, index in walk(proof):
            key = step.block_id if isinstance(step, Subproof) else step.label
            if key in seen:
                self.error(f"duplicate label {key}", step.line, 1, kind="duplicate-label")
            seen.add(key)
            if isinstance(step, Subproof):
                if not step.steps or not isinstance(step.steps[0], Assume):
                    self.error(f"subproof {step.block_id} must open with 'assume'", step.line, 1, kind="structure")
            elif isinstance(step, Assume):
                if depth == 0 or index != 0:
                    self.error(f"'assume' at {step.label} must open a subproof", step.line, 1, kind="structure")
            else:
                for ref, kind in zip(step.justification.cited, citation_kinds(step.justification)):
                    problem = scope.problem(ref, kind)
                    if problem is not None:
                        ekind, message = problem
                        if ekind == "out-of-scope":
                            ekind = "citation-out-of-scope"
                        self.error(f"{step.label}: {message}", step.line, 1, kind=ekind)


def parse_script(text: str) -> Document:
    """Parse a whole document; raises :class:`ScriptError` listing every problem."""
    reader = _ScriptReader(text)
    doc = reader.read()
    if reader.errors:
        raise ScriptError(sorted(reader.errors, key=lambda e: (e.line, e.column)))
    return doc


def _print_steps(steps, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    for s in steps:
        if isinstance(s, Subproof):
            out.append(f"{pad}sub {s.block_id}")
            _print_steps(s.steps, indent + 1, out)
            out.append(f"{pad}end")
        elif isinstance(s, Assume):
            out.append(f"{pad}{s.label}: assume {print_formula(s.formula)}")
        else:
            out.append(f"{pad}{s.label}: {print_formula(s.formula)}   [{s.justification}]")


def print_proof(proof: ProofScript) -> str:
    head = f"proof {proof.name}"
    if proof.hypotheses:
        head += " from " + ", ".join(print_formula(h) for h in proof.hypotheses)
    out = [head]
    _print_steps(proof.steps, 1, out)
    out.append(f"qed {print_formula(proof.conclusion)}")
    return "\n".join(out) + "\n"


def print_definition(d: Definition) -> str:
    op = ":=" if d.kind is DefinitionKind.IDENTITY else "<=>"
    return f"def {d.name} {op} {print_formula(d.body)}"


def print_script(doc: Document) -> str:
    parts = []
    if doc.definitions:
        parts.append("\n".join(print_definition(d) for d in doc.definitions) + "\n")
    parts.extend(print_proof(p) for p in doc.proofs)
    return "\n".join(parts)
