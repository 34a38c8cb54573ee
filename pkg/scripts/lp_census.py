"""Brute-force validity of each rule schema in LP and in classical logic."""
from dataclasses import dataclass

from paradoxlab.semantics import SCHEMAS, Logic, rule_valid


@dataclass
class CensusConfig:
    logics: tuple[Logic, ...] = (Logic.LP, Logic.CL)


def run(cfg: CensusConfig) -> None:
    width = max(map(len, SCHEMAS))
    print(f"{'rule':<{width}}  " + "  ".join(f"{l.value:<24}" for l in cfg.logics))
    for name, schema in sorted(SCHEMAS.items()):
        cells = [str(rule_valid(schema, logic)) for logic in cfg.logics]
        print(f"{name:<{width}}  " + "  ".join(f"{c:<24}" for c in cells))


if __name__ == "__main__":
    run(CensusConfig())
