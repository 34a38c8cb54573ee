"""Check every corpus proof under every built-in profile and print the verdict table."""
import argparse
import json
from dataclasses import dataclass, field

from paradoxlab.corpus import load_expected, run_matrix
from paradoxlab.kernel import BUILTIN_PROFILES


@dataclass
class MatrixConfig:
    profiles: list[str] = field(default_factory=lambda: list(BUILTIN_PROFILES))
    as_json: bool = False


def run(cfg: MatrixConfig) -> int:
    report = run_matrix([BUILTIN_PROFILES[p] for p in cfg.profiles])
    print(json.dumps(report.as_dict(), indent=2) if cfg.as_json else report.table())
    problems = report.mismatches(load_expected())
    for p in problems:
        print("mismatch:", p)
    return 1 if problems else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--profiles", default=",".join(BUILTIN_PROFILES))
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args()
    raise SystemExit(run(MatrixConfig(a.profiles.split(","), a.json)))
