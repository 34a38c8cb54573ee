"""The shipped paradox derivations and their expected verdict matrix."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .kernel import BUILTIN_PROFILES, CheckResult, Profile, check_proof
from .syntax import Document, ProofScript, parse_script

DATA_DIR = Path(__file__).parent / "data"
EXPECTED_FILE = DATA_DIR / "expected-matrix.json"

NAMES = ("liar", "liar-up", "liar-down", "explosion", "curry", "curry-rc", "vcurry")


@dataclass(frozen=True)
class Cell:
    verdict: str
    label: Optional[str] = None
    reason: Optional[str] = None

    @classmethod
    def from_result(cls, result: CheckResult) -> "Cell":
        if result.valid:
            return cls("valid")
        label, failure = result.first_failure
        return cls("invalid", label, failure.kind)

    @classmethod
    def from_dict(cls, d: dict) -> "Cell":
        return cls(d["verdict"], d.get("label"), d.get("reason"))

    def as_dict(self) -> dict:
        if self.verdict == "valid":
            return {"verdict": "valid"}
        return {"verdict": self.verdict, "label": self.label, "reason": self.reason}

    def __str__(self) -> str:
        return "valid" if self.verdict == "valid" else f"invalid@{self.label}"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    path: Path
    text: str
    document: Document
    expected: dict[str, Cell]

    @property
    def proof(self) -> ProofScript:
        return self.document.proof(self.name)

    @property
    def definitions(self):
        return self.document.definitions

    def check(self, profile: Profile) -> CheckResult:
        return check_proof(self.proof, self.definitions, profile)


def load_expected(path: Path = EXPECTED_FILE) -> dict[str, dict[str, Cell]]:
    raw = json.loads(path.read_text(encoding="utf-8"))
    return {
        proof: {profile: Cell.from_dict(cell) for profile, cell in row.items()}
        for proof, row in raw["matrix"].items()
    }


def corpus_documents() -> list[CorpusEntry]:
    expected = load_expected()
    entries = []
    for name in NAMES:
        path = DATA_DIR / f"{name}.prf"
        text = path.read_text(encoding="utf-8")
        entries.append(CorpusEntry(name, path, text, parse_script(text), expected.get(name, {})))
    return entries


def definitions_file(name: str) -> Path:
    return DATA_DIR / f"defs-{name}.prf"


@dataclass(frozen=True)
class MatrixReport:
    profiles: tuple[str, ...]
    rows: dict[str, dict[str, Cell]]

    def as_dict(self) -> dict:
        return {
            "profiles": list(self.profiles),
            "matrix": {
                proof: {p: row[p].as_dict() for p in self.profiles} for proof, row in self.rows.items()
            },
        }

    def mismatches(self, expected: dict[str, dict[str, Cell]]) -> list[str]:
        """Cells that differ from ``expected`` (restricted to this report's profiles)."""
        problems = []
        for proof in sorted(set(self.rows) | set(expected)):
            for p in self.profiles:
                got = self.rows.get(proof, {}).get(p)
                want = expected.get(proof, {}).get(p)
                if got != want:
                    problems.append(f"{proof} x {p}: expected {_show(want)}, got {_show(got)}")
        return problems

    def table(self) -> str:
        if not self.profiles:
            return "(no profiles)"
        width = max([len("proof")] + [len(n) for n in self.rows])
        cols = [max(len(p), 12) for p in self.profiles]
        head = "proof".ljust(width) + "  " + "  ".join(p.ljust(c) for p, c in zip(self.profiles, cols))
        lines = [head.rstrip(), "-" * len(head.rstrip())]
        for proof, row in self.rows.items():
            cells = "  ".join(str(row[p]).ljust(c) for p, c in zip(self.profiles, cols))
            lines.append((proof.ljust(width) + "  " + cells).rstrip())
        return "\n".join(lines)


def _show(cell: Optional[Cell]) -> str:
    if cell is None:
        return "nothing"
    if cell.verdict == "valid":
        return "valid"
    return f"invalid at {cell.label} ({cell.reason})"


def run_matrix(
    profiles: Sequence[Profile] = tuple(BUILTIN_PROFILES.values()),
    entries: Optional[Sequence[CorpusEntry]] = None,
) -> MatrixReport:
    """Check every corpus proof under every profile."""
    if entries is None:
        entries = corpus_documents()
    names = tuple(p.name for p in profiles)
    rows = {e.name: {p.name: Cell.from_result(e.check(p)) for p in profiles} for e in entries}
    return MatrixReport(names, rows)
