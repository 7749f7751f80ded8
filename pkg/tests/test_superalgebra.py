import itertools
import json
from pathlib import Path

import pytest
import sympy as sp

from susyms.classification import REFLECTION
from susyms.errors import ClosureError, ParityError, TruncationError
from susyms.grassmann import GradedExpr, odd_const, theta1
from susyms.superalgebra import (CLASSICAL_ORDER, TABLE1_ORDER, SuperVectorField, classical_algebra,
                                 classical_generators, structure_table, superbracket, susy_algebra,
                                 susy_generators, table_from_golden, verify_decomposition, x, y)

GOLDEN = Path(__file__).parent / "golden"


def test_table1_matches_golden():
    data = json.loads((GOLDEN / "table1.json").read_text())
    alg = susy_algebra()
    assert data["basis"] == list(TABLE1_ORDER)
    expected = table_from_golden(data, alg)
    for a in alg.names:
        for b in alg.names:
            assert alg.table.entries[(a, b)] == expected[(a, b)], (a, b)


def test_classical_table_matches_golden():
    data = json.loads((GOLDEN / "classical_table.json").read_text())
    alg = classical_algebra()
    expected = {}
    for item in data["nonzero"]:
        e = alg.parse(item["value"])
        expected[(item["a"], item["b"])] = {n: c.body() for n, c in e.coeffs.items()}
    for a in CLASSICAL_ORDER:
        for b in CLASSICAL_ORDER:
            got = alg.table.entries[(a, b)]
            if (a, b) in expected:
                assert got == expected[(a, b)]
            elif (b, a) in expected:
                assert got == {n: -c for n, c in expected[(b, a)].items()}
            else:
                assert got == {}, (a, b)


def test_bracket_examples():
    g = susy_generators()
    P1 = g["P1"]
    assert superbracket(g["Q1"], g["Q1"]) == P1.scale(-2)
    assert superbracket(g["D"], g["P5"]) == g["P5"].scale(-4)
    assert superbracket(g["Q1"], g["P3"]) == P1.scale(-1)


def test_cell_kinds():
    t = susy_algebra().table
    assert t.kind("Q1", "P3") == "anticommutator"
    assert t.kind("D", "Q1") == "commutator"


def test_single_generator_table():
    t = structure_table({"P1": susy_generators()["P1"]})
    assert t.entries == {("P1", "P1"): {}}


def test_closure_error():
    g = susy_generators()
    with pytest.raises(ClosureError):
        structure_table({"D": g["D"], "Q1": g["Q1"]})


def test_mixed_parity_field():
    with pytest.raises(ParityError):
        SuperVectorField({"x": 1, "Phi": GradedExpr.atom(theta1)}).parity


def _sign(p, q):
    return -1 if p and q else 1


def test_super_jacobi_all_triples():
    alg = susy_algebra()
    par = alg.parities
    names = alg.names
    assert len(list(itertools.product(names, repeat=3))) == 512
    for a, b, c in itertools.product(names, repeat=3):
        A, B, C = (alg.generator(n) for n in (a, b, c))
        total = (alg.bracket(A, alg.bracket(B, C)).scale(_sign(par[a], par[c]))
                 + alg.bracket(B, alg.bracket(C, A)).scale(_sign(par[b], par[a]))
                 + alg.bracket(C, alg.bracket(A, B)).scale(_sign(par[c], par[b])))
        assert total.is_zero(), (a, b, c)


def test_super_antisymmetry():
    alg = susy_algebra()
    t = alg.table
    for a, b in itertools.product(alg.names, repeat=2):
        s = _sign(alg.parities[a], alg.parities[b])
        assert t.entries[(a, b)] == {n: -s * v for n, v in t.entries[(b, a)].items()}


def test_reflection_is_an_automorphism():
    t = susy_algebra().table
    for (a, b), val in t.entries.items():
        image = {REFLECTION[n]: v for n, v in val.items()}
        assert t.entries[(REFLECTION[a], REFLECTION[b])] == image


def test_bch_worked_example():
    alg = susy_algebra()
    r, alpha = sp.symbols("r alpha")
    eta, lam, mu, nu = (odd_const(n) for n in ("eta", "lambda", "mu", "nu"))
    Y = alg.element(P1=r, P3=eta, Q1=lam)
    X = alg.element(P1=alpha, P3=mu, Q1=nu)
    out = alg.adjoint_action(Y, X)
    shift = alpha + eta * nu + lam * mu + 2 * lam * nu
    assert out == alg.element(P1=shift, P3=mu, Q1=nu)


def test_bch_trivial_and_terminating():
    alg = susy_algebra()
    X = alg.parse("P1 + mu*P3")
    assert alg.adjoint_action(alg.element(), X) == X
    D = alg.generator("D")
    assert alg.adjoint_action(alg.generator("P5"), D) == alg.parse("D + 4*P5")


def test_bch_diagonal_dilation():
    alg = susy_algebra()
    t = sp.Symbol("t")
    out = alg.adjoint_action(alg.element(D=t), alg.parse("P1 + mu*Q1 + P5"))
    assert out == alg.element(P1=sp.exp(-2 * t), Q1=sp.exp(-t) * odd_const("mu"), P5=sp.exp(-4 * t))


def test_truncation_error():
    alg = classical_algebra()
    with pytest.raises(TruncationError):
        alg.adjoint_action(alg.generator("e4"), alg.generator("e5"))


def test_classical_dilation_scales_translations():
    alg = classical_algebra()
    t = sp.Symbol("t")
    assert alg.adjoint_action(alg.element(e7=t), alg.generator("e1")) == alg.element(e1=sp.exp(-t))


def test_decomposition_report():
    rep = verify_decomposition()
    assert rep.ok, [c for c in rep.checks if not c.ok]


def test_su2_killing_form():
    K = classical_algebra().killing_form(["e4", "e5", "e6"])
    assert K == -2 * sp.eye(3)


def test_vector_field_round_trip():
    alg = susy_algebra()
    e = alg.parse("D + 2*P1 + mu*P3 + nu*Q2")
    assert alg.from_vector_field(alg.to_vector_field(e)) == e


def test_classical_generators_as_fields():
    g = classical_generators()
    assert g["e5"].coefficient("y") == GradedExpr.scalar(-sp.Symbol("u"))
    assert g["e7"](x * y) == GradedExpr.scalar(2 * x * y)


def test_exports():
    t = susy_algebra().table
    d = t.to_dict(TABLE1_ORDER)
    assert d["schema"] == 1 and d["rows"]["Q1"]["Q1"] == "-2*P1"
    assert "\\begin{tabular}" in t.to_latex(TABLE1_ORDER)
    assert t.to_markdown(TABLE1_ORDER).splitlines()[0].startswith("| | D | P1 | P3")
    assert json.loads(t.to_json(TABLE1_ORDER)) == d
