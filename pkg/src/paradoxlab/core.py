"""Formula object model, sentence definitions and truth values.

Formulas are immutable trees built from frozen dataclasses, so ``==`` is
structural equality and formulas are hashable.  Sentence names (``L``, ``C``,
``Pi``) are opaque constants; self-reference enters only through a
:class:`Definition`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import chain
from typing import Iterator, Optional, Sequence, Tuple, Union


class TruthValue(enum.Enum):
    """LP truth values, totally ordered ``f < b < t``."""

    F = 0
    B = 1
    T = 2

    def __lt__(self, other: "TruthValue") -> bool:
        if not isinstance(other, TruthValue):
            return NotImplemented
        return self.value < other.value

    def __le__(self, other: "TruthValue") -> bool:
        if not isinstance(other, TruthValue):
            return NotImplemented
        return self.value <= other.value

    def __str__(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "TruthValue":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown truth value {text!r} (expected t, b or f)") from None


# Formula variants


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class SentenceName:
    name: str


@dataclass(frozen=True)
class Falsum:
    pass


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class TrueOf:
    operand: "Formula"


@dataclass(frozen=True)
class FalseOf:
    operand: "Formula"


@dataclass(frozen=True)
class ValidOf:
    premise: "Formula"
    conclusion: "Formula"


Formula = Union[
    Atom, SentenceName, Falsum, Not, And, Or, Implies, Iff, TrueOf, FalseOf, ValidOf
]

BOT = Falsum()

# A position is the path of child indices from the root.
Position = Tuple[int, ...]


def children(f: Formula) -> Tuple[Formula, ...]:
    match f:
        case Atom() | SentenceName() | Falsum():
            return ()
        case Not(a) | TrueOf(a) | FalseOf(a):
            return (a,)
        case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | ValidOf(a, b):
            return (a, b)
    raise TypeError(f"not a formula: {f!r}")


def rebuild(f: Formula, kids: Sequence[Formula]) -> Formula:
    """Return a node of the same kind as ``f`` with new children."""
    if not kids:
        return f
    return type(f)(*kids)


def subformulas(f: Formula) -> Iterator[Tuple[Position, Formula]]:
    """Pre-order traversal yielding ``(position, node)`` pairs."""
    stack = [((), f)]
    while stack:
        pos, node = stack.pop()
        yield pos, node
        kids = children(node)
        for i in reversed(range(len(kids))):
            stack.append((pos + (i,), kids[i]))


def at(f: Formula, pos: Position) -> Formula:
    for i in pos:
        f = children(f)[i]
    return f


def replace_at(f: Formula, pos: Position, new: Formula) -> Formula:
    if not pos:
        return new
    kids = list(children(f))
    kids[pos[0]] = replace_at(kids[pos[0]], pos[1:], new)
    return rebuild(f, kids)


def occurrences(f: Formula, target: Formula) -> list[Position]:
    """Outermost, non-overlapping positions where ``target`` occurs in ``f``."""
    found: list[Position] = []

    def visit(node: Formula, pos: Position) -> None:
        if node == target:
            found.append(pos)
            return
        for i, kid in enumerate(children(node)):
            visit(kid, pos + (i,))

    visit(f, ())
    return found


def atoms_and_names(f: Formula) -> list[str]:
    """Sorted identifiers (atoms and sentence names) occurring in ``f``."""
    seen = {node.name for _, node in subformulas(f) if isinstance(node, (Atom, SentenceName))}
    return sorted(seen)


def identifiers(formulas: Sequence[Formula]) -> list[str]:
    return sorted(set(chain.from_iterable(atoms_and_names(f) for f in formulas)))


def equal_formulas(a: Formula, b: Formula) -> bool:
    return a == b


def contains_valid_of(f: Formula) -> bool:
    return any(isinstance(node, ValidOf) for _, node in subformulas(f))


# Definitions


class DefinitionKind(str, enum.Enum):
    IDENTITY = "identity"
    BICONDITIONAL = "biconditional"


@dataclass(frozen=True)
class Definition:
    """``name := body`` (identity) or ``name <=> body`` (biconditional)."""

    name: str
    body: Formula
    kind: DefinitionKind = DefinitionKind.IDENTITY

    def as_biconditional(self) -> Iff:
        return Iff(SentenceName(self.name), self.body)


class SubstitutionError(ValueError):
    """Raised when a substitution of identity cannot be carried out."""


class DefinitionKindError(SubstitutionError):
    pass


class NoOccurrenceError(SubstitutionError):
    pass


def substitute_name(
    f: Formula,
    definition: Definition,
    direction: str = "unfold",
    positions: Optional[Sequence[Position]] = None,
) -> Formula:
    """Substitute a sentence name for its definiens (``unfold``) or back (``fold``).

    ``positions`` restricts the substitution to the given paths; by default
    every occurrence is replaced.  Only identity definitions license this.
    """
    if definition.kind is not DefinitionKind.IDENTITY:
        raise DefinitionKindError(
            f"{definition.name} is defined by a biconditional; substitution needs an identity"
        )
    name = SentenceName(definition.name)
    if direction == "unfold":
        source, target = name, definition.body
    elif direction == "fold":
        source, target = definition.body, name
    else:
        raise ValueError(f"direction must be 'unfold' or 'fold', not {direction!r}")

    if positions is None:
        positions = occurrences(f, source)
        if direction == "fold" and not positions:
            raise NoOccurrenceError(f"no occurrence of the definiens of {definition.name}")
    for pos in positions:
        try:
            node = at(f, pos)
        except IndexError:
            raise NoOccurrenceError(f"no subformula at position {pos}") from None
        if node != source:
            raise NoOccurrenceError(f"position {pos} does not hold the {direction} source")
    for pos in positions:
        f = replace_at(f, pos, target)
    return f
