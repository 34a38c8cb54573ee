"""The closed registry of inference-rule names and their argument shapes."""
from __future__ import annotations

# Argument kinds: "line" cites a visible line label, "block" a closed subproof,
# "name" a sentence name, "dir" is unfold/fold.  A trailing "?" marks an
# optional argument.
SIGNATURES: dict[str, tuple[str, ...]] = {
    "premise": (),
    "defbi": ("name",),
    "mp": ("line", "line"),
    "iffmp": ("line", "line"),
    "cp": ("block",),
    "conji": ("line", "line"),
    "disji": ("line",),
    "ds": ("line", "line"),
    "telim": ("line",),
    "tintro": ("line",),
    "subst": ("line", "name", "dir?"),
    "valintro": ("block",),
    "valelim": ("line",),
    "bivalence": ("name", "block", "block"),
    "rc": ("line",),
    "explode": ("line", "line"),
    "reit": ("line",),
}

RULES: tuple[str, ...] = tuple(SIGNATURES)

# Rules that discharge a subproof.
DISCHARGING = frozenset({"cp", "valintro", "bivalence"})

# premise and reit can never be switched off.
GUARDED = frozenset({"premise", "reit"})

DIRECTIONS = ("unfold", "fold")


def arity_range(rule: str) -> tuple[int, int]:
    sig = SIGNATURES[rule]
    required = sum(1 for kind in sig if not kind.endswith("?"))
    return required, len(sig)
