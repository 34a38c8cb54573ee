import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from paradoxlab.corpus import corpus_documents
from paradoxlab.kernel import (
    ALL_LINES,
    BUILTIN_PROFILES,
    CLASSICAL,
    LINEAR,
    Profile,
    ProfileError,
    audit_resources,
    build_profile,
    check_proof,
)
from paradoxlab.rules import RULES
from paradoxlab.syntax import Derived, ScriptError, Subproof, iter_steps, parse_formula, parse_script

P = BUILTIN_PROFILES
CORPUS = {e.name: e for e in corpus_documents()}


def check(name, profile):
    return CORPUS[name].check(P[profile] if isinstance(profile, str) else profile)


def run(text, profile=CLASSICAL, proof=None):
    doc = parse_script(text)
    p = doc.proofs[0] if proof is None else doc.proof(proof)
    return check_proof(p, doc.definitions, profile)


def failure_at(result):
    label, failure = result.first_failure
    return label, failure.kind


# worked examples


def test_curry_classical_establishes_bot():
    r = check("curry", "classical")
    assert r.valid
    assert str(r.established) == "|- bot"


def test_curry_substructural_shows_double_discharge():
    r = check("curry", "substructural")
    assert not r.valid
    assert r.usage["2.1"].cited_by == ("2.2", "2.3")
    assert failure_at(r) == ("2.1", "contraction")
    assert str(r.first_failure[1]) == "assumption 2.1 cited 2 times (2.2, 2.3)"


def test_curry_without_deduction_theorem_fails_at_line_3():
    r = check("curry", "no-dt")
    assert r.first_failure[0] == "3"
    assert str(r.first_failure[1]) == "rule-disabled(cp)"


def test_explosion_dialetheic_fails_at_ds():
    r = check("explosion", "dialetheic")
    assert r.first_failure[0] == "4"
    assert str(r.first_failure[1]) == "rule-disabled(ds)"


def test_vcurry_survives_no_dt():
    r = check("vcurry", "no-dt")
    assert r.valid and str(r.established) == "|- bot"


def test_liar_dialetheic_establishes_glut():
    r = check("liar", "dialetheic")
    assert r.valid and str(r.established) == "|- T(L) & F(L)"


def test_explosion_sequent_lists_hypotheses():
    assert str(check("explosion", "classical").established) == "a, ~a |- b"


# profiles


def test_build_profile_examples():
    assert build_profile("classical", disable={"ds", "explode"}) == P["dialetheic"]
    assert build_profile("classical", disable={"cp"}) == P["no-dt"]
    assert build_profile(None) == CLASSICAL
    with pytest.raises(ProfileError):
        build_profile(disable={"premise"})
    with pytest.raises(ProfileError):
        build_profile(enable={"cp"}, disable={"cp"})
    with pytest.raises(ProfileError):
        build_profile(disable={"nonsense"})
    with pytest.raises(ProfileError):
        build_profile("intuitionist")


def test_builtin_profile_table():
    assert P["classical"].enabled == frozenset(RULES)
    assert P["dialetheic"].enabled == frozenset(RULES) - {"ds", "explode"}
    assert P["substructural"].enabled == frozenset(RULES) - {"rc"}
    assert P["substructural"].structural == LINEAR
    assert P["dialetheic-substructural"].enabled == frozenset(RULES) - {"ds", "explode", "rc"}
    assert P["no-dt"].enabled == frozenset(RULES) - {"cp"}
    assert all(p.allows("bivalence") and p.allows("valintro") for p in P.values())


def test_guarded_rules_always_enabled():
    assert Profile(frozenset()).enabled == {"premise", "reit"}


def test_profile_order():
    assert P["dialetheic-substructural"] <= P["substructural"] <= P["classical"]
    assert not P["classical"] <= P["substructural"]
    strict = build_profile("substructural", scope=ALL_LINES)
    assert strict <= P["substructural"]
    assert not P["substructural"] <= strict


# individual rules

REIT = """
proof restate from a
  1: a   [premise]
  sub s
    2: assume b
    3: a   [reit 1]
  end
  4: b -> a   [cp s]
qed b -> a
"""

EXPLODE = """
proof boom from a, ~a
  1: a    [premise]
  2: ~a   [premise]
  3: q    [explode 2, 1]
qed q
"""


def test_reit_restates_enclosing_line():
    assert run(REIT).valid


def test_explode_rule_and_its_toggle():
    assert run(EXPLODE).valid
    r = run(EXPLODE, P["dialetheic"])
    assert failure_at(r) == ("3", "rule-disabled")


@pytest.mark.parametrize(
    "line, kind",
    [
        ("3: b   [mp 1, 2]", "schema-mismatch"),
        ("3: a & b   [conji 1, 1]", "schema-mismatch"),
        ("3: b | c   [disji 1]", "schema-mismatch"),
        ("3: b   [ds 1, 2]", "schema-mismatch"),
        ("3: q   [explode 1, 1]", "schema-mismatch"),
        ("3: a   [telim 1]", "schema-mismatch"),
        ("3: T(b)   [tintro 1]", "schema-mismatch"),
        ("3: a -> b   [valelim 1]", "schema-mismatch"),
        ("3: a -> b   [rc 2]", "schema-mismatch"),
        ("3: b   [iffmp 2, 1]", "schema-mismatch"),
        ("3: c   [premise]", "schema-mismatch"),
        ("3: b   [reit 1]", "schema-mismatch"),
        ("3: X <-> a   [defbi X]", "unknown-definition"),
        ("3: a   [subst 1, X]", "unknown-definition"),
    ],
)
def test_schema_mismatches(line, kind):
    text = f"proof bad from a, a -> c\n  1: a  [premise]\n  2: a -> c  [premise]\n  {line}\nqed a\n"
    r = run(text)
    assert ("3", kind) in [(label, f.kind) for label, f in r.lines if f is not None]


@pytest.mark.parametrize(
    "line, ok",
    [
        ("3: c   [mp 2, 1]", True),
        ("3: c   [mp 1, 2]", True),
        ("3: a & a -> c   [conji 1, 2]", False),
        ("3: a & (a -> c)   [conji 1, 2]", True),
        ("3: (a -> c) & a   [conji 1, 2]", True),
        ("3: c | a   [disji 1]", True),
        ("3: T(a)   [tintro 1]", True),
    ],
)
def test_schema_instances(line, ok):
    text = f"proof good from a, a -> c\n  1: a  [premise]\n  2: a -> c  [premise]\n  {line}\nqed {line.split(':')[1].split('[')[0].strip()}\n"
    assert run(text).valid is ok


def test_ds_mirror_and_iffmp_both_directions():
    text = """
proof m from a | b, ~b, x <-> y, y
  1: a | b    [premise]
  2: ~b       [premise]
  3: a        [ds 1, 2]
  4: x <-> y  [premise]
  5: y        [premise]
  6: x        [iffmp 4, 5]
  7: a & x    [conji 3, 6]
qed a & x
"""
    assert run(text).valid


def test_telim_valelim_rc_instances():
    text = """
proof t from T(p), Val(p, q), p -> (p -> q)
  1: T(p)          [premise]
  2: p             [telim 1]
  3: Val(p, q)     [premise]
  4: p -> q        [valelim 3]
  5: p -> (p -> q) [premise]
  6: p -> q        [rc 5]
  7: q             [mp 6, 2]
qed q
"""
    assert run(text).valid


def test_subst_checks_definition_kind_and_positions():
    base = "def L := F(L)\ndef C <=> C -> bot\n"
    assert run(base + "proof u from T(L) & L\n  1: T(L) & L  [premise]\n  2: T(L) & F(L)  [subst 1, L, unfold]\nqed T(L) & F(L)\n").valid
    assert run(base + "proof u from T(L) & L\n  1: T(L) & L  [premise]\n  2: T(F(L)) & F(L)  [subst 1, L]\nqed T(F(L)) & F(L)\n").valid
    r = run(base + "proof u from T(L)\n  1: T(L)  [premise]\n  2: T(F(L))  [subst 1, L, fold]\nqed T(F(L))\n")
    assert failure_at(r) == ("2", "schema-mismatch")
    r = run(base + "proof u from C\n  1: C  [premise]\n  2: C -> bot  [subst 1, C]\nqed C -> bot\n")
    assert failure_at(r) == ("2", "kind-error")
    r = run(base + "proof u\n  1: L <-> F(L)  [defbi L]\nqed L <-> F(L)\n")
    assert failure_at(r) == ("1", "kind-error")


def test_bivalence_needs_matching_cases():
    liar = CORPUS["liar"]
    text = liar.text.replace("2.4: T(L) & F(L)      [conji 2.1, 2.3]", "2.4: F(L) & T(L)      [conji 2.1, 2.3]")
    assert text != liar.text
    r = run(text)
    assert failure_at(r) == ("3", "schema-mismatch")
    swapped = liar.text.replace("[bivalence L, s1, s2]", "[bivalence L, s2, s1]")
    assert run(swapped).valid


def test_conclusion_must_match_last_top_level_line():
    r = run("proof q from a\n  1: a  [premise]\nqed b\n")
    assert failure_at(r) == ("qed", "conclusion-mismatch")


# structural discipline


def test_free_mode_ignores_citation_counts():
    for name in CORPUS:
        assert check(name, "classical").valid


def test_linear_blocks_are_consumed_once():
    text = """
proof twice
  sub s
    1: assume a
  end
  2: a -> a   [cp s]
  3: Val(a, a)   [valintro s]
  4: (a -> a) & Val(a, a)   [conji 2, 3]
qed (a -> a) & Val(a, a)
"""
    assert run(text).valid
    r = run(text, build_profile("classical", structural="linear"))
    assert failure_at(r) == ("3", "contraction")
    assert "subproof s discharged 2 times (2, 3)" in str(r.first_failure[1])


def test_all_lines_scope_meters_derived_lines():
    r = check("curry", build_profile("classical", structural="linear", scope=ALL_LINES))
    failed = {label for label, f in r.lines if f is not None}
    # 1 is cited by 2.2 and 4; 3 by 4 and 5; 2.1 by 2.2 and 2.3
    assert failed == {"1", "2.1", "3"}
    assert r.usage.scope == ALL_LINES
    assert r.usage["s2"].count == 1


def test_linear_verdict_iff_contraction_or_line_failure():
    for entry in CORPUS.values():
        for profile in (P["substructural"], P["dialetheic-substructural"]):
            r = entry.check(profile)
            free = entry.check(Profile(profile.enabled, "free"))
            contracted = bool(r.usage.contraction_points)
            assert r.valid == (free.valid and not contracted)


# audit


def test_audit_examples():
    liar = audit_resources(CORPUS["liar"].proof)
    assert [(u.label, u.cited_by) for u in liar.entries] == [("1.1", ("1.2", "1.4")), ("2.1", ("2.2", "2.4"))]
    assert audit_resources(CORPUS["curry"].proof)["2.1"].cited_by == ("2.2", "2.3")
    assert audit_resources(CORPUS["vcurry"].proof)["2.1"].cited_by == ("2.2", "2.4")
    assert audit_resources(CORPUS["liar-up"].proof).contraction_points == []


def test_audit_all_lines_counts_every_line():
    report = audit_resources(CORPUS["vcurry"].proof, ALL_LINES)
    assert report["1"].cited_by == ("2.2", "5")
    assert report["3"].cited_by == ("4", "5")
    assert report["s2"].cited_by == ("3",)


def test_check_is_deterministic():
    for entry in CORPUS.values():
        for profile in P.values():
            assert entry.check(profile) == entry.check(profile)


def test_check_never_evaluates_truth():
    # a valid derivation of bot is fine: validity is derivational only
    assert check("vcurry", "classical").valid


# monotonicity

PAIRS = [(a, b) for a in P for b in P if P[a] <= P[b]]


@pytest.mark.parametrize("weak, strong", PAIRS)
def test_monotonicity(weak, strong):
    for entry in CORPUS.values():
        if entry.check(P[weak]).valid:
            assert entry.check(P[strong]).valid


# scope soundness under fuzzing


def _refs(proof):
    return proof.labels() + proof.block_ids() + ["9.9", "zz"]


def _mutate(proof, picks):
    """Replace the citations of derived steps, walking the tree."""
    it = iter(picks)

    def go(steps):
        out = []
        for s in steps:
            if isinstance(s, Subproof):
                out.append(dataclasses.replace(s, steps=tuple(go(s.steps))))
            elif isinstance(s, Derived) and s.justification.cited:
                cited = tuple(next(it, c) for c in s.justification.cited)
                out.append(dataclasses.replace(s, justification=dataclasses.replace(s.justification, cited=cited)))
            else:
                out.append(s)
        return out

    return dataclasses.replace(proof, steps=tuple(go(proof.steps)))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.data())
def test_fuzzed_citations_never_crash(name, data):
    entry = CORPUS[name]
    proof = entry.proof
    n = sum(len(s.justification.cited) for s in iter_steps(proof.steps) if isinstance(s, Derived))
    picks = data.draw(st.lists(st.sampled_from(_refs(proof)), min_size=n, max_size=n))
    mutated = _mutate(proof, picks)
    for profile in P.values():
        r = check_proof(mutated, entry.definitions, profile)
        scope_failures = [f for _, f in r.lines if f is not None and f.kind in ("out-of-scope", "unknown-reference", "wrong-reference")]
        if scope_failures:
            assert not r.valid


def test_citing_closed_block_interior_is_invalid_not_crash():
    proof = CORPUS["curry"].proof
    mutated = _mutate(proof, ["1", "2.1", "2.2", "2.1", "s2", "1", "2.3", "3", "4"])
    r = check_proof(mutated, CORPUS["curry"].definitions)
    assert not r.valid
    assert ("4", "out-of-scope") in [(label, f.kind) for label, f in r.lines if f]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.data())
def test_fuzzed_script_text_gives_structured_errors(name, data):
    entry = CORPUS[name]
    labels = _refs(entry.proof)
    lines = entry.text.splitlines()
    candidates = [i for i, line in enumerate(lines) if "[" in line and "," in line or "[cp" in line or "[reit" in line]
    i = data.draw(st.sampled_from(candidates))
    head, _, tail = lines[i].rpartition("[")
    rule = tail.split()[0].rstrip("]")
    args = data.draw(st.lists(st.sampled_from(labels), min_size=1, max_size=3))
    lines[i] = f"{head}[{rule} {', '.join(args)}]"
    text = "\n".join(lines)
    try:
        doc = parse_script(text)
    except ScriptError as e:
        assert e.errors
        assert all(err.line >= 1 and err.kind for err in e.errors)
        return
    for profile in P.values():
        check_proof(doc.proofs[0], doc.definitions, profile)


def test_programmatic_duplicate_labels_fail():
    proof = CORPUS["explosion"].proof
    steps = proof.steps + (dataclasses.replace(proof.steps[0]),)
    r = check_proof(dataclasses.replace(proof, steps=steps))
    assert ("1", "duplicate-label") in [(label, f.kind) for label, f in r.lines if f]


def test_top_level_assume_is_rejected():
    proof = parse_script("proof p\n  sub s\n    1: assume a\n  end\n  2: a -> a [cp s]\nqed a -> a\n").proofs[0]
    bad = dataclasses.replace(proof, steps=proof.steps[0].steps + proof.steps[1:])
    r = check_proof(bad)
    assert r.first_failure[1].kind == "malformed-subproof"
    assert parse_formula("a -> a") == bad.conclusion
