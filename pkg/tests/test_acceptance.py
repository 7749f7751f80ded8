"""Acceptance criteria 1-10.  Each test records one PASS/FAIL line, printed in
the terminal summary under "acceptance criteria"."""

import json
import time
from pathlib import Path

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings

from susyms.classical import (symmetry_report, verify_radial_abel, verify_radial_fd)
from susyms.classification import NONSTANDARD_LABELS, classify
from susyms.elliptic import elliptic_integral, quadrature_oracle
from susyms.grassmann import odd_const
from susyms.reduction import (PRINTED_ODES, g72i_omega_identity, printed_solutions, reduce_bodiless,
                              verify_symbolic)
from susyms.superalgebra import TABLE1_ORDER, classical_algebra, susy_algebra, table_from_golden
from susyms.supercalculus import IDENTITIES, check_operator_identities, extension_difference

GOLDEN = Path(__file__).parent / "golden"


def test_criterion_01_operator_identities(criterion):
    with criterion(1, "operator identities"):
        start = time.perf_counter()
        rep = check_operator_identities()
        assert len(rep) == len(IDENTITIES) >= 9
        assert all(rep.values()), [k for k, v in rep.items() if not v]
        assert time.perf_counter() - start < 1.0


def test_criterion_02_extension_equivalence(criterion):
    with criterion(2, "operator form == component form"):
        start = time.perf_counter()
        assert extension_difference().is_zero()
        assert time.perf_counter() - start < 10.0


def test_criterion_03_table1(criterion):
    with criterion(3, "8x8 supercommutation table"):
        alg = susy_algebra()
        data = json.loads((GOLDEN / "table1.json").read_text())
        assert data["basis"] == list(TABLE1_ORDER)
        expected = table_from_golden(data, alg)
        assert len(expected) == 64
        for key, cell in expected.items():
            assert alg.table.entries[key] == cell, key


def test_criterion_04_classical_table_and_symmetries(criterion):
    with criterion(4, "classical table and prolongation check"):
        alg = classical_algebra()
        data = json.loads((GOLDEN / "classical_table.json").read_text())
        expected = {}
        for item in data["nonzero"]:
            e = alg.parse(item["value"])
            cell = {n: c.body() for n, c in e.coeffs.items()}
            expected[(item["a"], item["b"])] = cell
            expected[(item["b"], item["a"])] = {n: -c for n, c in cell.items()}
        for key, cell in alg.table.entries.items():
            assert cell == expected.get(key, {}), key
        rep = symmetry_report()
        control = rep.pop("x*d_u (control)")
        assert len(rep) == 7 and all(v == 0 for v in rep.values())
        assert control != 0


def test_criterion_05_bch_example(criterion):
    with criterion(5, "BCH coefficient shift"):
        alg = susy_algebra()
        r, alpha = sp.symbols("r alpha")
        eta, lam, mu, nu = (odd_const(n) for n in ("eta", "lambda", "mu", "nu"))
        out = alg.adjoint_action(alg.element(P1=r, P3=eta, Q1=lam), alg.element(P1=alpha, P3=mu, Q1=nu))
        assert out == alg.element(P1=alpha + eta * nu + lam * mu + 2 * lam * nu, P3=mu, Q1=nu)


def test_criterion_06_classification(criterion):
    with criterion(6, "classification counts and labels"):
        start = time.perf_counter()
        counts = [len(classify(s)) for s in ("s1", "s2", "s", "tilde-s", "full")]
        assert counts == [7, 7, 63, 127, 255]
        golden = json.loads((GOLDEN / "subalgebra_lists.json").read_text())
        alg = susy_algebra()
        dd = classify("deduped")
        assert [c.label for c in dd] == [f"L{i}" for i in range(1, 144)]
        for c in dd:
            assert alg.parse(golden["L"][c.label[1:]]) == c.element, c.label
        flagged = tuple(c.label for c in dd if not c.standard)
        assert flagged == NONSTANDARD_LABELS and len(flagged) == 9
        assert time.perf_counter() - start < 60.0


@pytest.mark.xfail(strict=True, reason="the G136 reduction yields (4*w^2 + xi^2 + 4)*w'' = 0, "
                   "not the printed ODE; see the decision ledger")
def test_criterion_07_reduced_odes(criterion):
    with criterion(7, "reduced ODEs (L74 and G136)"):
        assert reduce_bodiless("L74").matches(PRINTED_ODES["L74"])
        got = reduce_bodiless("G136")
        assert got.matches(PRINTED_ODES["G136"]), f"G136 gives {got.text}"


def test_criterion_08_symbolic_solutions(criterion):
    with criterion(8, "symbolic solution verification"):
        sols = printed_solutions()
        for name in ("G1", "G4", "G15", "G66i", "G66ii", "G72ii"):
            assert verify_symbolic(sols[name]).status == "identically zero", name
        assert g72i_omega_identity() == 0
        for name, want in (("G64a", {"C4": "-c2"}), ("G64b", {"M": "a"})):
            rep = verify_symbolic(sols[name])
            assert rep.status == "constraint variety", name
            assert rep.to_dict()["constraints"] == [want], name


def test_criterion_09_numeric_oracles(criterion):
    with criterion(9, "elliptic quadrature, FD and Abel residuals"):
        k = 2 ** -0.5
        for phi in np.linspace(-4, 4, 25):
            for kind in ("F", "E"):
                assert abs(elliptic_integral(kind, phi, k) - quadrature_oracle(kind, phi, k)) <= 1e-10
        for s0 in (0.5, 1.0, 2.0):
            for k0 in (0.0, 1.0):
                rep = verify_radial_fd(s0, k0)
                assert rep.max_residual <= 1e-6, rep
            assert verify_radial_abel(s0).max_residual <= 1e-8


def test_criterion_10_property_suites(criterion):
    from test_classification import conjugations, round_trip_property
    from test_grassmann import elements, graded_ring_property
    from test_parser import parser_round_trip_property, polys
    from test_superalgebra import test_super_jacobi_all_triples

    with criterion(10, "property suites"):
        settings(max_examples=1000, deadline=None)(
            given(elements, elements, elements)(graded_ring_property))()
        test_super_jacobi_all_triples()
        settings(max_examples=1000, deadline=None)(given(conjugations())(round_trip_property))()
        settings(max_examples=500, deadline=None)(given(polys)(parser_round_trip_property))()
