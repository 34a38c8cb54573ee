"""Solve the self-referential definitions of the corpus in LP and CL."""
from dataclasses import dataclass

from paradoxlab.corpus import definitions_file
from paradoxlab.semantics import Logic, format_valuation, solve_definitions
from paradoxlab.syntax import parse_script


@dataclass
class SolveConfig:
    files: tuple[str, ...] = ("liar", "curry")
    modes: tuple[str, ...] = ("equational", "designated-iff")


def run(cfg: SolveConfig) -> None:
    for name in cfg.files:
        defs = parse_script(definitions_file(name).read_text()).definitions
        for mode in cfg.modes:
            for logic in (Logic.LP, Logic.CL):
                sols = solve_definitions(defs, logic, mode)
                shown = "; ".join(format_valuation(s) for s in sols) or "no solution"
                print(f"defs-{name:<6} {mode:<15} {logic.value}: {shown}")


if __name__ == "__main__":
    run(SolveConfig())
