"""Graded differentiation on superspace (x, y, theta1, theta2).

Derivative symbols ("jets") of the fields are represented as follows:

* even jets are sympy ``Derivative`` objects of an undefined function of
  ``(x, y)``; a superfield jet carrying both theta-derivatives uses the
  function name ``Phi_t12``;
* odd jets are :class:`~susyms.grassmann.OddAtom` instances of kind ``"jet"``.

A jet ``(field, dx, dy, t1, t2)`` always stands for
``d_x^dx d_y^dy d_theta1^t1 d_theta2^t2 field`` in that operator order.
Theta-derivatives are left derivatives obeying the graded Leibniz rule.
"""

from __future__ import annotations

from functools import lru_cache

import sympy as sp
from sympy.core.function import AppliedUndef

from .errors import ParityError, UsageError
from .grassmann import (
    FIELD_PARITY,
    SUPERFIELDS,
    GradedExpr,
    OddAtom,
    as_graded,
    eta1,
    eta2,
    gsubstitute,
    parity_of,
    theta1,
    theta2,
)

x, y = sp.symbols("x y")

# even symbols that may be used as differentiation variables
BOSONIC_COORDINATES = frozenset({"x", "y", "t", "xi", "Phi", "u"})
ODD_COORDINATES = (theta1, theta2, eta1, eta2)


def _fname(field, t1, t2):
    if not (t1 or t2):
        return field
    return field + "_t" + ("1" if t1 else "") + ("2" if t2 else "")


@lru_cache(maxsize=None)
def field_function(field, t1=0, t2=0):
    return sp.Function(_fname(field, t1, t2))


def jet_parity(field, t1=0, t2=0):
    return (FIELD_PARITY[field] + t1 + t2) % 2


def jet(field, dx=0, dy=0, t1=0, t2=0) -> GradedExpr:
    """The derivative symbol ``d_x^dx d_y^dy d_t1^t1 d_t2^t2`` of ``field``."""
    if field not in FIELD_PARITY:
        raise UsageError(f"unknown field {field!r}")
    if (t1 or t2) and field not in SUPERFIELDS:
        raise UsageError(f"theta-derivative of the component field {field!r}")
    if dx < 0 or dy < 0 or t1 not in (0, 1) or t2 not in (0, 1):
        raise UsageError("invalid multi-index")
    if jet_parity(field, t1, t2):
        return GradedExpr.atom(odd_jet_atom(field, dx, dy, t1, t2))
    base = field_function(field, t1, t2)(x, y)
    spec = [(v, n) for v, n in ((x, dx), (y, dy)) if n]
    return GradedExpr.scalar(sp.Derivative(base, *spec) if spec else base)


@lru_cache(maxsize=None)
def odd_jet_atom(field, dx=0, dy=0, t1=0, t2=0) -> OddAtom:
    name = _fname(field, t1, t2) + (f"[x{dx}y{dy}]" if dx or dy else "")
    return OddAtom(name, "jet", (field, dx, dy, t1, t2))


def jet_info(atom):
    """``(field, dx, dy, t1, t2)`` for a jet atom, or ``None``."""
    if isinstance(atom, OddAtom):
        return atom.jet if atom.kind == "jet" else None
    counts = {x: 0, y: 0}
    if isinstance(atom, sp.Derivative):
        for v, n in atom.variable_count:
            if v not in counts:
                return None
            counts[v] += n
        atom = atom.expr
    if not isinstance(atom, AppliedUndef) or atom.args != (x, y):
        return None
    name = atom.func.__name__
    field, t1, t2 = name, 0, 0
    if "_t" in name:
        field, flags = name.split("_t", 1)
        t1, t2 = int("1" in flags), int("2" in flags)
    if field not in FIELD_PARITY:
        return None
    return (field, counts[x], counts[y], t1, t2)


def even_jets(expr, field=None):
    """Even jet atoms occurring in a sympy expression."""
    found = set()
    for a in expr.atoms(sp.Derivative, AppliedUndef):
        info = jet_info(a)
        if info is not None and (field is None or info[0] == field):
            found.add(a)
    return found


def jets_in(e, field=None):
    """All jet atoms (even sympy ones and odd atoms) present in ``e``."""
    e = as_graded(e)
    found = set()
    for key, coeff in e.items():
        found |= even_jets(coeff, field)
        for a in key:
            if a.kind == "jet" and (field is None or a.jet[0] == field):
                found.add(a)
    return found


def _theta_jet(info, index):
    """(sign, new info) for d_theta_index applied to a superfield jet, or None."""
    field, dx, dy, t1, t2 = info
    if field not in SUPERFIELDS:
        return None
    if index == 1:
        if t1:
            return None
        return 1, (field, dx, dy, 1, t2)
    if t2:
        return None
    # d_t2 d_t1 = -d_t1 d_t2
    return (-1 if t1 else 1), (field, dx, dy, t1, 1)


def _coordinate(var):
    if isinstance(var, str):
        for a in ODD_COORDINATES:
            if a.name == var:
                return a
        var = sp.Symbol(var)
    if isinstance(var, OddAtom):
        if var.kind not in ("theta", "eta"):
            raise UsageError(f"cannot differentiate with respect to the constant {var}")
        return var
    if isinstance(var, sp.Symbol) and var.name in BOSONIC_COORDINATES:
        return var
    raise UsageError(f"cannot differentiate with respect to {var!r}")


def _accumulate(pairs):
    acc = {}
    for key, c in pairs:
        acc[key] = acc.get(key, 0) + c
    return GradedExpr(acc)


def partial_derivative(e, var) -> GradedExpr:
    """Left partial derivative of ``e`` with respect to a coordinate.

    Odd coordinates follow ``d(fg) = (df)g + (-1)^deg(f) f(dg)``.
    Differentiating with respect to a constant raises :class:`UsageError`.
    """
    e = as_graded(e)
    var = _coordinate(var)
    if isinstance(var, OddAtom):
        return _odd_derivative(e, var)
    return _even_derivative(e, var)


def _even_derivative(e, var):
    pairs = []
    for key, c in e.items():
        dc = sp.diff(c, var)
        if dc != 0:
            pairs.append((key, dc))
        if var not in (x, y):
            continue
        for i, a in enumerate(key):
            if a.kind != "jet":
                continue
            field, dx, dy, t1, t2 = a.jet
            new = odd_jet_atom(field, dx + (var == x), dy + (var == y), t1, t2)
            pairs.append((key[:i] + (new,) + key[i + 1:], c))
    return _accumulate(pairs)


def _odd_derivative(e, var):
    index = {theta1: 1, theta2: 2}.get(var)
    pairs = []
    for key, c in e.items():
        if index is not None:
            for a in even_jets(c):
                hit = _theta_jet(jet_info(a), index)
                if hit is None:
                    continue
                sign, info = hit
                dc = sp.diff(c, a)
                if dc == 0:
                    continue
                pairs.append(((odd_jet_atom(*info),) + key, sign * dc))
        for i, a in enumerate(key):
            sign = -1 if i % 2 else 1
            rest = key[:i] + key[i + 1:]
            if a == var:
                pairs.append((rest, sign * c))
            elif index is not None and a.kind == "jet":
                hit = _theta_jet(a.jet, index)
                if hit is None:
                    continue
                s2, info = hit
                pairs.append((rest, sign * s2 * c * jet(*info).body()))
    return _accumulate(pairs)


def derivative_sequence(e, variables) -> GradedExpr:
    """Apply derivatives left to right: the first variable acts first."""
    for v in variables:
        e = partial_derivative(e, v)
    return e


# -- supersymmetry generators and covariant derivatives ------------------------

OPERATORS = ("Dx", "Dy", "Dt1", "Dt2", "D1", "D2", "Q1", "Q2")


def apply_operator(op: str, e) -> GradedExpr:
    """Apply one of ``Dx, Dy, Dt1, Dt2, D1, D2, Q1, Q2`` to ``e``."""
    e = as_graded(e)
    if op == "Dx":
        return partial_derivative(e, x)
    if op == "Dy":
        return partial_derivative(e, y)
    if op == "Dt1":
        return partial_derivative(e, theta1)
    if op == "Dt2":
        return partial_derivative(e, theta2)
    if op in ("D1", "Q1"):
        sign = 1 if op == "D1" else -1
        return partial_derivative(e, theta1) + sign * (theta1 * partial_derivative(e, x))
    if op in ("D2", "Q2"):
        sign = 1 if op == "D2" else -1
        return partial_derivative(e, theta2) + sign * (theta2 * partial_derivative(e, y))
    raise UsageError(f"unknown operator {op!r}")


def apply_word(word, e) -> GradedExpr:
    """Apply an operator word; the rightmost operator acts first."""
    for op in reversed(list(word)):
        e = apply_operator(op, e)
    return e


def superfield_expansion(field="Phi", components=("v", "phi", "psi", "u")) -> GradedExpr:
    """``v + theta1*phi + theta2*psi + theta1*theta2*u``."""
    v, phi, psi, u = (jet(c) for c in components)
    return v + theta1 * phi + theta2 * psi + theta1 * theta2 * u


def jet_of_value(value, info) -> GradedExpr:
    """Derivative of an explicit superfield value matching the jet ``info``."""
    _, dx, dy, t1, t2 = info
    out = as_graded(value)
    if t2:
        out = partial_derivative(out, theta2)
    if t1:
        out = partial_derivative(out, theta1)
    for _ in range(dy):
        out = partial_derivative(out, y)
    for _ in range(dx):
        out = partial_derivative(out, x)
    return out


def substitute_field(e, value, field="Phi") -> GradedExpr:
    """Replace every jet of ``field`` in ``e`` by the matching derivative of ``value``."""
    e = as_graded(e)
    bindings = {}
    for a in jets_in(e, field):
        bindings[a] = jet_of_value(value, jet_info(a))
    return gsubstitute(e, bindings)


def expand_superfield(e, field="Phi") -> GradedExpr:
    """Replace superfield jets by the component expansion, differentiated accordingly."""
    return substitute_field(e, superfield_expansion(field), field)


# -- the supersymmetric minimal surface equation -------------------------------

def phi_sub(subscripts: str, field="Phi") -> GradedExpr:
    """Superfield with a subscript list, e.g. ``"x t1 t2"`` for ``Phi_{x theta1 theta2}``.

    Subscripts act left to right: ``Phi_{x t1 t2} = d_t2 d_t1 d_x Phi``.
    """
    names = {"x": x, "y": y, "t1": theta1, "t2": theta2}
    tokens = subscripts.split()
    for tok in tokens:
        if tok not in names:
            raise UsageError(f"bad subscript {tok!r}")
    return derivative_sequence(jet(field), [names[t] for t in tokens])


def _bracket(first, second, third, fourth):
    S = phi_sub
    return (-S(first) + theta1 * S(second) - theta2 * S(third)
            + theta1 * theta2 * S(fourth))


def residual_operator_form() -> GradedExpr:
    """Left-hand side built from covariant derivatives of an abstract superfield."""
    P = jet("Phi")
    D = lambda word: apply_word(word, P)  # noqa: E731
    return (D(["D2"] * 4)
            + D(["D1"] * 2) * D(["D1"] * 3 + ["D2"]) * D(["D1"] + ["D2"] * 5)
            - 2 * D(["D1"] * 2) * D(["D1"] + ["D2"] * 3) * D(["D1"] * 3 + ["D2"] * 3)
            + D(["D1"] * 4)
            + D(["D2"] * 2) * D(["D1"] + ["D2"] * 3) * D(["D1"] * 5 + ["D2"]))


def residual_component_form(literal=False) -> GradedExpr:
    """Left-hand side written with explicit x, y, theta derivatives.

    With ``literal=True`` the second factor of the first product uses the
    typeset ``-Phi_yy*theta1*theta2`` instead of ``-Phi_{yy theta1 theta2}``.
    """
    S = phi_sub
    if literal:
        first_tail = (-S("y y") * theta1 * theta2 + theta1 * S("x y y t2")
                      - theta2 * S("y y y t1") + theta1 * theta2 * S("x y y y"))
    else:
        first_tail = _bracket("y y t1 t2", "x y y t2", "y y y t1", "x y y y")
    return (S("y y") + S("x x")
            + S("x") * _bracket("x t1 t2", "x x t2", "x y t1", "x x y") * first_tail
            - 2 * S("x") * _bracket("y t1 t2", "x y t2", "y y t1", "x y y")
            * _bracket("x y t1 t2", "x x y t2", "x y y t1", "x x y y")
            + S("y") * _bracket("y t1 t2", "x y t2", "y y t1", "x y y")
            * _bracket("x x t1 t2", "x x x t2", "x x y t1", "x x x y"))


def susy_ms_residual(form="component", literal=False) -> GradedExpr:
    if form == "operator":
        return residual_operator_form()
    if form == "component":
        return residual_component_form(literal=literal)
    raise UsageError(f"unknown form {form!r}")


IDENTITIES = {
    "{Q1,Q1}=-2dx": (("Q1", "Q1", 1), ("Dx", -2)),
    "{Q2,Q2}=-2dy": (("Q2", "Q2", 1), ("Dy", -2)),
    "{Q1,Q2}=0": (("Q1", "Q2", 1), None),
    "D1^2=dx": (("D1", "D1", 0), ("Dx", 1)),
    "D2^2=dy": (("D2", "D2", 0), ("Dy", 1)),
    "{D1,D2}=0": (("D1", "D2", 1), None),
    "{D1,Q1}=0": (("D1", "Q1", 1), None),
    "{D1,Q2}=0": (("D1", "Q2", 1), None),
    "{D2,Q1}=0": (("D2", "Q1", 1), None),
    "{D2,Q2}=0": (("D2", "Q2", 1), None),
}


def operator_identity_sides(name, target):
    (a, b, anti), rhs = IDENTITIES[name]
    ab = apply_word([a, b], target)
    lhs = ab + apply_word([b, a], target) if anti else ab
    right = GradedExpr.zero() if rhs is None else rhs[1] * apply_operator(rhs[0], target)
    return lhs, right


def check_operator_identities(target=None) -> dict:
    """Verify the (anti)commutation relations of D1, D2, Q1, Q2 on ``target``.

    Returns ``{identity: bool}``; the default target is the abstract superfield.
    """
    target = jet("Phi") if target is None else as_graded(target)
    report = {}
    for name in IDENTITIES:
        lhs, rhs = operator_identity_sides(name, target)
        report[name] = (lhs - rhs).is_zero()
    return report


def extension_difference(literal=False) -> GradedExpr:
    """Operator form minus component form, both expanded in components."""
    op = expand_superfield(residual_operator_form())
    comp = expand_superfield(residual_component_form(literal=literal))
    return op - comp


def supersymmetry_transform(value, which, eta) -> GradedExpr:
    """Finite transformation generated by Q1 (``which=1``) or Q2 (``which=2``)
    with odd parameter ``eta``: x -> x - eta*theta1, theta1 -> theta1 + eta
    (respectively y, theta2), applied to a superfield value."""
    eta = as_graded(eta)
    if parity_of(eta) not in ("odd", "zero"):
        raise ParityError("the supersymmetry parameter must be odd")
    if which == 1:
        rule = {x: GradedExpr.scalar(x) - eta * GradedExpr.atom(theta1),
                theta1: GradedExpr.atom(theta1) + eta}
    elif which == 2:
        rule = {y: GradedExpr.scalar(y) - eta * GradedExpr.atom(theta2),
                theta2: GradedExpr.atom(theta2) + eta}
    else:
        raise UsageError("which must be 1 or 2")
    return gsubstitute(value, rule)
