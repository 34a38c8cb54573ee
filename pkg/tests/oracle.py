"""Independent brute-force oracle for LP / classical facts.

Values are the integers 0 (f), 1 (b), 2 (t).  The tables are written out
entry by entry and the schemas as plain lambdas, so nothing here goes
through paradoxlab's formula evaluator.
"""
import itertools

NAMES = {0: "f", 1: "b", 2: "t"}

NEG = {0: 2, 1: 1, 2: 0}

AND = {
    (0, 0): 0, (0, 1): 0, (0, 2): 0,
    (1, 0): 0, (1, 1): 1, (1, 2): 1,
    (2, 0): 0, (2, 1): 1, (2, 2): 2,
}

OR = {
    (0, 0): 0, (0, 1): 1, (0, 2): 2,
    (1, 0): 1, (1, 1): 1, (1, 2): 2,
    (2, 0): 2, (2, 1): 2, (2, 2): 2,
}

# material conditional ~A | B
IMP = {
    (0, 0): 2, (0, 1): 2, (0, 2): 2,
    (1, 0): 1, (1, 1): 1, (1, 2): 2,
    (2, 0): 0, (2, 1): 1, (2, 2): 2,
}

IFF = {(x, y): AND[IMP[x, y], IMP[y, x]] for x in range(3) for y in range(3)}

VALUES = {"lp": (0, 1, 2), "cl": (0, 2)}
DESIGNATED = {"lp": {1, 2}, "cl": {2}}

# name -> (premises, conclusion), each a function of (A, B)
SCHEMAS = {
    "mp": (lambda A, B: [IMP[A, B], A], lambda A, B: B),
    "ds": (lambda A, B: [OR[A, B], NEG[A]], lambda A, B: B),
    "explode": (lambda A, B: [A, NEG[A]], lambda A, B: B),
    "conji": (lambda A, B: [A, B], lambda A, B: AND[A, B]),
    "disji": (lambda A, B: [A], lambda A, B: OR[A, B]),
    # T is transparent, so T(A) has A's value
    "telim": (lambda A, B: [A], lambda A, B: A),
    "tintro": (lambda A, B: [A], lambda A, B: A),
    "lem": (lambda A, B: [], lambda A, B: OR[A, NEG[A]]),
    "rc": (lambda A, B: [IMP[A, IMP[A, B]]], lambda A, B: IMP[A, B]),
    "iffmp": (lambda A, B: [IFF[A, B], A], lambda A, B: B),
}

# Which metavariables each schema mentions; enumeration only ranges over these.
METAVARS = {
    "mp": "AB", "ds": "AB", "explode": "AB", "conji": "AB", "disji": "AB",
    "telim": "A", "tintro": "A", "lem": "A", "rc": "AB", "iffmp": "AB",
}


def countermodels(rule, logic):
    """Every countermodel, in lexicographic order over f < b < t."""
    premises, conclusion = SCHEMAS[rule]
    names = METAVARS[rule]
    found = []
    for combo in itertools.product(VALUES[logic], repeat=len(names)):
        env = dict(zip(names, combo))
        A, B = env.get("A", 0), env.get("B", 0)
        if all(p in DESIGNATED[logic] for p in premises(A, B)) and conclusion(A, B) not in DESIGNATED[logic]:
            found.append({k: NAMES[v] for k, v in env.items()})
    return found


def first_countermodel(rule, logic):
    found = countermodels(rule, logic)
    return found[0] if found else None


def liar_fixed_points(logic, mode="equational"):
    # L := F(L), i.e. v(L) must equal not-v(L)
    return _fixed(lambda v: NEG[v], logic, mode)


def curry_fixed_points(logic, mode="equational"):
    # C <=> C -> bot
    return _fixed(lambda v: IMP[v, 0], logic, mode)


def _fixed(body, logic, mode):
    out = []
    for v in VALUES[logic]:
        if mode == "equational":
            ok = v == body(v)
        else:
            ok = IFF[v, body(v)] in DESIGNATED[logic]
        if ok:
            out.append(NAMES[v])
    return out
