import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from susyms.errors import ExpressionSyntaxError, ParityError
from susyms.grassmann import GradedExpr, odd_const, theta1, theta2
from susyms.parser import parse_expression, to_source
from susyms.serialize import serialize
from susyms.supercalculus import jet, x, y

k = sp.Symbol("k")
ODD = [GradedExpr.atom(a) for a in (theta1, theta2, odd_const("mu"), odd_const("nu"))]
EVEN = [GradedExpr.scalar(e) for e in (x, y, k, sp.sqrt(x ** 2 + 1), sp.exp(y), sp.I * x)]
EVEN += [jet("Phi", 1, 0), jet("u"), jet("Phi", 0, 1, 1, 0)]
ODD += [jet("phi"), jet("Phi", t1=1)]

factor = st.one_of(st.sampled_from(ODD), st.sampled_from(EVEN),
                   st.fractions(min_value=-5, max_value=5, max_denominator=4).map(
                       lambda q: GradedExpr.scalar(sp.Rational(q))))
monomial = st.lists(factor, min_size=1, max_size=4).map(
    lambda fs: fs[0] if len(fs) == 1 else _prod(fs))
polys = st.lists(monomial, min_size=1, max_size=4).map(sum)


def _prod(fs):
    out = fs[0]
    for f in fs[1:]:
        out = out * f
    return out


def parser_round_trip_property(e):
    assert parse_expression(to_source(e)) == e


test_serialize_parse_round_trip = settings(max_examples=100, deadline=None)(
    given(polys)(parser_round_trip_property))


def test_example_with_declarations():
    src = "odd mu; even k; k*theta1*theta2*sqrt(x^2 + 1) + mu*theta1 + Phi_t1(x, y) + diff(u(x, y), x)"
    e = parse_expression(src)
    assert e.coefficient((theta1, odd_const("mu"))) == -1  # mu*theta1 = -theta1*mu
    assert serialize(e) == "diff(u(x, y), x) + Phi_t1(x, y) + k*sqrt(x**2 + 1)*theta1*theta2 - theta1*mu"


def test_anticommuting_input():
    assert parse_expression("theta2*theta1 + theta1*theta2").is_zero()


def test_division_and_powers():
    e = parse_expression("odd mu; 1/(1 + theta1*mu)")
    assert e == parse_expression("odd mu; 1 - theta1*mu")
    assert parse_expression("(x + theta1*theta2)^2") == parse_expression("x^2 + 2*x*theta1*theta2")


def test_elliptic_modulus_convention():
    e = parse_expression("EllipticF(x, 1/2)")
    assert e.body() == sp.elliptic_f(x, sp.Rational(1, 4))


@pytest.mark.parametrize("src,line,col", [
    ("x +* y", 1, 4),
    ("q*x", 1, 1),
    ("x +\n  (y", 2, 5),
    ("odd mu; even mu; x", 1, 14),
    ("x $ y", 1, 3),
])
def test_syntax_errors_carry_position(src, line, col):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(src)
    assert (info.value.line, info.value.column) == (line, col)
    assert isinstance(info.value, SyntaxError)


@pytest.mark.parametrize("src", ["sqrt(theta1)", "even phi; x", "odd u; x"])
def test_parity_errors(src):
    with pytest.raises(ParityError):
        parse_expression(src)
