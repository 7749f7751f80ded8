import json
from pathlib import Path

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from susyms.classification import (NONSTANDARD_LABELS, apply_conjugator, classify,
                                   classify_stage_S1, export_json, family_element, g_to_l,
                                   normalize_to_representative, parameter_names, reflect_element,
                                   representative, splitting_conjugator)
from susyms.errors import NoMatch
from susyms.grassmann import GradedExpr, odd_const
from susyms.superalgebra import susy_algebra

GOLDEN = json.loads((Path(__file__).parent / "golden" / "subalgebra_lists.json").read_text())
alg = susy_algebra()


@pytest.mark.parametrize("stage,count", [("s1", 7), ("s2", 7), ("s", 63), ("tilde-s", 127),
                                         ("full", 255), ("deduped", 143)])
def test_stage_counts(stage, count):
    assert len(classify(stage)) == count


def test_dedupe_flag():
    assert [c.label for c in classify("full", dedupe_reflection=True)] == [c.label for c in classify("deduped")]


def _same(golden_text, cls):
    return alg.parse(golden_text) == cls.element


def test_full_list_matches_golden():
    full = classify("full")
    assert len(GOLDEN["G"]) == 255
    for cls in full:
        assert _same(GOLDEN["G"][str(cls.g_index)], cls), cls


def test_deduped_list_matches_golden():
    dd = classify("deduped")
    assert [c.label for c in dd] == [f"L{i}" for i in range(1, 144)]
    for cls in dd:
        assert _same(GOLDEN["L"][cls.label[1:]], cls), cls


def test_nonstandard_flags():
    flagged = tuple(c.label for c in classify("deduped") if not c.standard)
    assert flagged == NONSTANDARD_LABELS


def test_stage_examples():
    s1 = classify_stage_S1()
    assert len(s1) == 7
    assert s1[6].element == alg.parse("P1 + mu*P3 + nu*Q1")
    assert representative("G15").element == alg.parse("P1 + k*P2")
    assert representative("G128").element == alg.generator("D")
    assert len([c for c in classify("full") if c.g_index >= 129]) == 127
    assert representative("L8").element == alg.parse("P1 + k*P2")


def test_g4_orbit_never_gains_q1():
    G4 = representative("G4").element
    r = sp.Symbol("r")
    eta, lam = odd_const("eta"), odd_const("lambda")
    out = alg.adjoint_action(alg.element(P1=r, P3=eta, Q1=lam), G4)
    assert set(out.coeffs) == {"P1", "P3"}
    assert out.coefficient("P3") == G4.coefficient("P3")


def test_reflection_pairs():
    P2 = alg.generator("P2")
    assert reflect_element(P2) == alg.generator("P1")
    assert normalize_to_representative(P2).label == "L1"
    mapping = g_to_l()
    assert mapping[8] == mapping[1] == "L1"


def test_reflection_is_involution():
    for cls in classify("full"):
        assert reflect_element(reflect_element(cls.element)) == cls.element


def test_even_representatives_self_bracket():
    for cls in classify("full"):
        assert alg.bracket(cls.element, cls.element).is_zero()


def test_normalize_examples():
    mu = odd_const("mu")
    n = normalize_to_representative(alg.element(P1=3, P3=mu))
    assert n.label == "L4"
    assert apply_conjugator(alg.element(P1=3, P3=mu), n.steps) == n.representative
    assert normalize_to_representative(alg.generator("P1")).label == "L1"
    with pytest.raises(NoMatch):
        normalize_to_representative(alg.element())


def test_non_splitting_classes_conjugate_to_dilation():
    # a translation of the full group removes the translation part entirely
    for label in ("G129", "G200", "G255"):
        x = representative(label).element
        steps, out = splitting_conjugator(x)
        assert out == alg.generator("D")
        assert apply_conjugator(x, steps) == alg.generator("D")


def test_export_json():
    data = json.loads(export_json("full", dedupe_reflection=True))
    assert data["schema"] == 1 and data["count"] == 143
    assert data["classes"][0] == {"label": "L1", "G": "G1", "element": "P1", "stage": "deduped",
                                  "standard": True}


# -- conjugacy round trip -----------------------------------------------------------------

POOL = classify("deduped")
LAM, ETA = odd_const("lambda"), odd_const("eta")
small = st.fractions(min_value=-4, max_value=4, max_denominator=3)
nonzero = small.filter(lambda q: q != 0)


@st.composite
def conjugations(draw):
    cls = draw(st.sampled_from(POOL))
    vals = {}
    for g, p in parameter_names(cls.support).items():
        if p in ("k", "ell"):
            vals[p] = sp.Rational(draw(nonzero))
        elif p == "eps":
            vals[p] = draw(st.sampled_from([1, -1]))
    steps = []
    if "D" not in cls.support:
        co = {}
        for g in ("P1", "P2", "P5"):
            if draw(st.booleans()):
                co[g] = sp.Rational(draw(small))
        for g, a in (("P3", LAM), ("Q1", ETA), ("P4", LAM), ("Q2", ETA)):
            if draw(st.booleans()):
                co[g] = draw(st.integers(1, 3)) * GradedExpr.atom(a)
        steps.append(("adjoint", alg.element(co)))
    steps.append(("dilate", sp.Rational(draw(st.integers(1, 5)), draw(st.integers(1, 5)))))
    steps.append(("scale", sp.Rational(draw(nonzero))))
    if draw(st.booleans()):
        steps.append(("reflect",))
    return cls, family_element(cls.support, vals), steps


def round_trip_property(case):
    cls, rep, steps = case
    x = apply_conjugator(rep, steps)
    n = normalize_to_representative(x, "deduped")
    assert n.label == cls.label
    assert apply_conjugator(x, n.steps) == n.representative


test_conjugacy_round_trip = settings(max_examples=150, deadline=None)(
    given(conjugations())(round_trip_property))
