import pytest
import sympy as sp

from susyms.errors import ParityError, UsageError
from susyms.grassmann import GradedExpr, gsubstitute, odd_const, parity_of, theta1, theta2
from susyms.reduction import printed_solutions, residual_of, verify_symbolic
from susyms.supercalculus import (IDENTITIES, apply_operator, apply_word, check_operator_identities,
                                  expand_superfield, extension_difference, jet, partial_derivative,
                                  phi_sub, substitute_field, supersymmetry_transform,
                                  susy_ms_residual, x, y)

T1, T2 = GradedExpr.atom(theta1), GradedExpr.atom(theta2)
v, phi, psi, u = jet("v"), jet("phi"), jet("psi"), jet("u")


def test_theta_derivatives():
    assert partial_derivative(T1 * T2, theta1) == T2
    assert partial_derivative(T2 * T1, theta1) == -T2
    e = x * T1 * T2 + jet("Phi") + T1 * y
    assert not partial_derivative(partial_derivative(e, theta1), theta1)


def test_constant_is_not_a_variable():
    with pytest.raises(UsageError):
        partial_derivative(T1, odd_const("mu"))


def test_theta_derivatives_anticommute_on_superfield():
    P = jet("Phi") * x + T1 * T2 * jet("Phi", 1, 0)
    a = partial_derivative(partial_derivative(P, theta2), theta1)
    b = partial_derivative(partial_derivative(P, theta1), theta2)
    assert not (a + b)


def test_operator_examples():
    P = jet("Phi")
    assert apply_word(["D1", "D1"], P) == jet("Phi", 1, 0)
    assert apply_word(["Q1", "Q1"], P) == -jet("Phi", 1, 0)
    assert not (apply_word(["Q2", "D1"], P) + apply_word(["D1", "Q2"], P))


def test_parity_flip():
    assert parity_of(apply_operator("D1", jet("Phi"))) == "odd"
    assert parity_of(apply_word(["D1", "Q2"], jet("Phi"))) == "even"


def test_expand_superfield():
    assert expand_superfield(jet("Phi")) == v + T1 * phi + T2 * psi + T1 * T2 * u
    # d/dtheta1 of the expansion: phi + theta2*u
    assert expand_superfield(jet("Phi", t1=1)) == phi + T2 * u
    assert expand_superfield(jet("Phi", 2, 0)) == (jet("v", 2, 0) + T1 * jet("phi", 2, 0)
                                                  + T2 * jet("psi", 2, 0) + T1 * T2 * jet("u", 2, 0))


def test_expand_commutes_with_x_derivative():
    e = jet("Phi", 0, 1, 1, 0) * jet("Phi", 1, 0) + T2 * jet("Phi", t2=1)
    assert expand_superfield(partial_derivative(e, x)) == partial_derivative(expand_superfield(e), x)


def test_subscript_order():
    # Phi_{x t1 t2} = d_t2 d_t1 d_x Phi = -Phi with flags (1, 1)
    assert phi_sub("x t1 t2") == -jet("Phi", 1, 0, 1, 1)


def test_ten_identities():
    rep = check_operator_identities()
    assert len(rep) == len(IDENTITIES) == 10
    assert all(rep.values())
    assert all(check_operator_identities(T1 * T2 * u).values())


def test_residual_of_body_only_field():
    f = sp.Function("f")(x, y)
    R = substitute_field(susy_ms_residual("operator"), f)
    assert R.map_coefficients(sp.simplify) == GradedExpr.scalar(f.diff(x, 2) + f.diff(y, 2))
    assert not substitute_field(susy_ms_residual("component"), 0)


def test_operator_equals_component_form():
    assert extension_difference().is_zero()


def test_literal_reading_differs():
    assert not extension_difference(literal=True).is_zero()


# -- finite supersymmetry transformations ------------------------------------------

TAU = odd_const("tau")


def _generic_superfield():
    mu, nu = odd_const("mu"), odd_const("nu")
    v, a, b, w = (sp.Function(n)(x, y) for n in "vabw")
    return GradedExpr.scalar(v) + T1 * mu * a + T2 * nu * b + T1 * T2 * w


def _commutes_with_residual(transform):
    Phi = _generic_superfield()
    d = residual_of(transform(Phi)) - transform(residual_of(Phi))
    return d.map_coefficients(lambda c: sp.simplify(c.doit())).is_zero()


@pytest.mark.parametrize("which", [1, 2])
def test_supersymmetry_commutes_with_residual(which):
    assert _commutes_with_residual(lambda e: supersymmetry_transform(e, which, TAU))


def test_wrong_sign_flow_is_not_a_symmetry():
    # x -> x + tau*theta1 is the flow of D1, which is not a symmetry
    flow = lambda e: gsubstitute(e, {x: GradedExpr.scalar(x) + TAU * T1, theta1: T1 + TAU})
    assert not _commutes_with_residual(flow)


@pytest.mark.parametrize("name", ["G4", "G66i", "G72ii"])
@pytest.mark.parametrize("which", [1, 2])
def test_supersymmetry_maps_solutions_to_solutions(name, which):
    out = supersymmetry_transform(printed_solutions()[name], which, TAU)
    assert verify_symbolic(out).status == "identically zero"


def test_supersymmetry_transform_examples():
    assert supersymmetry_transform(T1, 1, TAU) == T1 + TAU
    assert supersymmetry_transform(GradedExpr.scalar(x ** 2), 1, TAU) == x ** 2 - 2 * x * TAU * T1
    with pytest.raises(ParityError):
        supersymmetry_transform(T1, 1, x)
    with pytest.raises(UsageError):
        supersymmetry_transform(T1, 3, TAU)
