"""Report how often each assumption of each corpus proof is cited."""
from dataclasses import dataclass

from paradoxlab.corpus import corpus_documents
from paradoxlab.kernel import ALL_LINES, ASSUMPTIONS_ONLY, audit_resources


@dataclass
class AuditConfig:
    all_lines: bool = False


def run(cfg: AuditConfig) -> None:
    scope = ALL_LINES if cfg.all_lines else ASSUMPTIONS_ONLY
    for entry in corpus_documents():
        report = audit_resources(entry.proof, scope)
        points = ", ".join(report.contraction_points) or "none"
        print(f"{entry.name:<10} contraction points: {points}")
        for u in report.entries:
            if u.count > 1:
                print(f"  {u.label}: cited by {', '.join(u.cited_by)}")


if __name__ == "__main__":
    run(AuditConfig())
