import mpmath
import numpy as np
import pytest
import sympy as sp

from susyms.classical import (ABEL_E4, EXTRA_CLASS, LISTED_CLASSES, Ad, apply_classical_steps,
                              classical_classify, classical_normalize, conservation_ratio,
                              euler_lagrange_check, helicoidal_profile, ms_residual,
                              prolong2_symmetry_check, radial_solution, reduce_classical,
                              su2_killing_form, symmetry_report, verify_helicoidal_abel,
                              verify_radial_abel, verify_radial_fd, x, y)
from susyms.errors import NoMatch, UsageError


def test_generators_are_symmetries():
    rep = symmetry_report()
    control = rep.pop("x*d_u (control)")
    assert len(rep) == 7 and all(v == 0 for v in rep.values())
    assert control != 0


def test_control_residual_value():
    ux, uy, uxy, uyy = sp.symbols("u_x u_y u_xy u_yy")
    r = prolong2_symmetry_check({"u": x})
    assert sp.simplify(r - 2 * (ux * uyy - uxy * uy)) == 0


def test_euler_lagrange_and_wick_rotation():
    rep = euler_lagrange_check()
    assert rep.ok, rep


def test_conservation_form():
    assert conservation_ratio() == 1


def test_simple_solutions():
    assert ms_residual(x + 2 * y) == 0
    assert sp.simplify(ms_residual(sp.atan(y / x))) == 0  # helicoid
    assert ms_residual(x ** 2) != 0


def test_killing_form():
    assert su2_killing_form() == -2 * sp.eye(3)


def test_classify_lists():
    assert tuple(classical_classify()) == LISTED_CLASSES
    assert classical_classify(include_extra=True)[-1] == EXTRA_CLASS


@pytest.mark.parametrize("seed", range(40))
def test_normalizer_round_trip(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=7)
    if seed % 4 == 1:
        X[[3, 4, 5, 6]] = 0  # translations only
    elif seed % 4 == 2:
        X[6] = 0  # rotations and translations
    n = classical_normalize(X)
    assert np.allclose(apply_classical_steps(n.steps, X), n.result, atol=1e-9)
    want = {0: EXTRA_CLASS, 3: EXTRA_CLASS, 1: "e1", 2: "e4 + m*e3"}[seed % 4]
    assert n.label == want
    nz = set(np.flatnonzero(np.abs(n.result) > 1e-9))
    assert nz <= {"e1": {0}, "e4 + m*e3": {2, 3}, EXTRA_CLASS: {3, 6}}[n.label]


def test_normalizer_special_classes():
    e = np.eye(7)
    assert classical_normalize(e[6] + 0.3 * e[0]).label == "e7"
    assert classical_normalize(e[3] + 0.4 * e[0]).label == "e4"
    screw = classical_normalize(e[5] + 0.4 * e[1])
    assert screw.label == "e4 + m*e3" and screw.parameter == pytest.approx(0.4)
    with pytest.raises(NoMatch):
        classical_normalize(np.zeros(7))


def test_ad_is_exponential():
    e = np.eye(7)
    out = Ad(e[3] * np.pi / 2, e[4])
    assert np.allclose(np.abs(out), np.abs(e[5]), atol=1e-12)


@pytest.mark.parametrize("label", ["e4", "e4+me3"])
def test_abel_reductions(label):
    assert reduce_classical(label).matches


def test_m_zero_recovers_e4():
    r = reduce_classical("e4+me3")
    assert sp.simplify(r.rhs.subs(sp.Symbol("m"), 0) - ABEL_E4) == 0
    with pytest.raises(UsageError):
        reduce_classical("e1")


@pytest.mark.parametrize("s0", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("k0", [0.0, 1.0])
def test_radial_solution_fd(s0, k0):
    rep = verify_radial_fd(s0, k0)
    assert rep.ok, rep
    # the plain stencil alone does not reach the tolerance
    assert rep.extra["second_order_residual"] > 1e-6


def test_radial_solution_exact():
    assert verify_radial_abel(1.0).max_residual < 1e-20


def test_helicoidal_printed_form_fails():
    rep = verify_helicoidal_abel(1.0, 0.7, absolute=True)
    assert not rep.ok and rep.max_residual > 1e-3


def test_helicoidal_principal_branch_holds():
    assert verify_helicoidal_abel(1.0, 0.7, absolute=False).max_residual < 1e-20


def test_helicoidal_absolute_first_term_is_constant():
    # |A| does not depend on xi, so the printed first term only adds a constant
    xi = sp.Symbol("xi")
    f = sp.lambdify(xi, helicoidal_profile(1, sp.Rational(7, 10), 0, True), "mpmath")
    vals = [float(mpmath.im(f(p))) for p in (3, 5, 8)]
    assert max(vals) - min(vals) < 1e-12
