"""Vector fields on (super)space, graded brackets and structure tables.

A :class:`SuperVectorField` stores one :class:`GradedExpr` coefficient per
coordinate direction, written to the left of the derivative.  Brackets are
computed from the action on coordinates,

    [X, Y]^z = X(Y^z) - (-1)^(|X||Y|) Y(X^z),

and re-expanded in a basis by solving a linear system over the rationals.
The resulting structure constants feed :class:`LieSuperalgebra`, which works
with formal combinations of generators whose coefficients may be odd
constants (``mu*P3`` is an even element).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from math import factorial

import sympy as sp

from .errors import ClosureError, ParityError, TruncationError, UsageError
from .grassmann import GradedExpr, OddAtom, as_graded, gmul, odd_const, parity_of, theta1, theta2
from .serialize import print_coefficient, serialize
from .supercalculus import partial_derivative, x, y

Phi = sp.Symbol("Phi")
u = sp.Symbol("u")

SUSY_COORDINATES = (x, y, theta1, theta2, Phi)
CLASSICAL_COORDINATES = (x, y, u)


def _coord_parity(c):
    return 1 if isinstance(c, OddAtom) else 0


def _coord_name(c):
    return c.name


class SuperVectorField:
    """First-order operator ``sum_z c_z d_z`` with graded coefficients."""

    def __init__(self, coeffs, coords=SUSY_COORDINATES, name=None):
        self.coords = tuple(coords)
        names = {_coord_name(c): c for c in self.coords}
        self.coeffs = {}
        for key, val in coeffs.items():
            key = names[key] if isinstance(key, str) else key
            if key not in self.coords:
                raise UsageError(f"{key} is not a coordinate")
            val = as_graded(val)
            if val:
                self.coeffs[key] = val
        self.name = name

    def coefficient(self, coord) -> GradedExpr:
        if isinstance(coord, str):
            coord = {_coord_name(c): c for c in self.coords}[coord]
        return self.coeffs.get(coord, GradedExpr.zero())

    @property
    def parity(self) -> int:
        """0 (even) or 1 (odd); raises ParityError for inhomogeneous fields."""
        found = set()
        for c, val in self.coeffs.items():
            p = parity_of(val)
            if p == "mixed":
                raise ParityError(f"inhomogeneous coefficient on d/d{c}: {val}")
            found.add((1 if p == "odd" else 0) ^ _coord_parity(c))
        if len(found) > 1:
            raise ParityError(f"vector field {self} has mixed parity")
        return found.pop() if found else 0

    def is_zero(self):
        return not self.coeffs

    def __call__(self, f) -> GradedExpr:
        f = as_graded(f)
        out = GradedExpr.zero()
        for c, val in self.coeffs.items():
            d = partial_derivative(f, c)
            if d:
                out = out + gmul(val, d)
        return out

    def _combine(self, other, sign):
        acc = dict(self.coeffs)
        for c, val in other.coeffs.items():
            acc[c] = acc.get(c, GradedExpr.zero()) + sign * val
        return SuperVectorField(acc, self.coords)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a):
        """Left multiplication of every coefficient by the constant ``a``."""
        a = as_graded(a)
        return SuperVectorField({c: gmul(a, v) for c, v in self.coeffs.items()}, self.coords)

    def __eq__(self, other):
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted((str(c), serialize(v)) for c, v in self.coeffs.items())))

    def __repr__(self):
        if self.name:
            return self.name
        if not self.coeffs:
            return "0"
        parts = []
        for c in self.coords:
            if c in self.coeffs:
                parts.append(f"({serialize(self.coeffs[c])})*d_{_coord_name(c)}")
        return " + ".join(parts)


def superbracket(X: SuperVectorField, Y: SuperVectorField) -> SuperVectorField:
    """Graded bracket of homogeneous vector fields.

    Anticommutator when both are odd, commutator otherwise.
    """
    p, q = X.parity, Y.parity
    sign = -1 if p * q else 1
    out = {}
    for c in X.coords:
        val = X(Y.coefficient(c)) - sign * Y(X.coefficient(c))
        if val:
            out[c] = val
    return SuperVectorField(out, X.coords)


def bracket_by_composition(X, Y, f) -> GradedExpr:
    """``X(Y f) -/+ Y(X f)`` evaluated directly on a test function."""
    sign = -1 if X.parity * Y.parity else 1
    return X(Y(f)) - sign * Y(X(f))


# -- basis expansion ------------------------------------------------------------

def _features(field: SuperVectorField):
    """Map (direction, even monomial, theta monomial) -> graded constant.

    Odd constants are moved to the left of the theta factors so that the
    result reads ``constant * (coordinate function) * d_z``.
    """
    even_coords = [c for c in field.coords if not isinstance(c, OddAtom)]
    feats = {}
    for c, val in field.coeffs.items():
        for key, coeff in val.items():
            thetas = tuple(a for a in key if a in field.coords)
            consts = tuple(a for a in key if a not in field.coords)
            sign = -1 if (len(thetas) % 2 and len(consts) % 2) else 1
            try:
                poly = sp.Poly(coeff, *even_coords)
            except sp.PolynomialError as exc:
                raise ClosureError(f"non-polynomial coefficient {coeff}", field) from exc
            for monom, mc in poly.terms():
                fkey = (_coord_name(c), monom, tuple(a.name for a in thetas))
                term = GradedExpr({consts: sign * mc})
                feats[fkey] = feats.get(fkey, GradedExpr.zero()) + term
    return {k: v for k, v in feats.items() if v}


class BasisExpander:
    """Exact re-expansion of vector fields in the span of a numeric basis."""

    def __init__(self, basis, names):
        self.basis = list(basis)
        self.names = list(names)
        cols = []
        keys = set()
        for b in self.basis:
            fb = _features(b)
            for v in fb.values():
                if v.odd_atoms():
                    raise UsageError("basis fields must have numeric coefficients")
            cols.append({k: v.body() for k, v in fb.items()})
            keys |= set(fb)
        self.keys = sorted(keys, key=str)
        self.matrix = sp.Matrix([[col.get(k, 0) for col in cols] for k in self.keys])
        if self.matrix.rank() < len(self.basis):
            raise UsageError("basis fields are linearly dependent")
        m = self.matrix
        self.left_inverse = (m.T * m).inv() * m.T

    def expand(self, field: SuperVectorField) -> dict:
        """Coefficients ``{name: GradedExpr}`` with ``field = sum c_i B_i``."""
        feats = _features(field)
        stray = [k for k in feats if k not in self.keys]
        if stray:
            raise ClosureError(f"{field} leaves the span of {self.names}", field)
        vec = [feats.get(k, GradedExpr.zero()) for k in self.keys]
        out = {}
        for i, name in enumerate(self.names):
            acc = GradedExpr.zero()
            for j, v in enumerate(vec):
                w = self.left_inverse[i, j]
                if w != 0 and v:
                    acc = acc + w * v
            if acc:
                out[name] = acc
        for j, k in enumerate(self.keys):
            back = GradedExpr.zero()
            for i, name in enumerate(self.names):
                if name in out and self.matrix[j, i] != 0:
                    back = back + self.matrix[j, i] * out[name]
            if back != vec[j]:
                raise ClosureError(f"{field} leaves the span of {self.names}", field)
        return out


# -- the generators ---------------------------------------------------------------

def susy_generators() -> dict:
    """The eight symmetry generators of the SUSY MS equation."""
    t1, t2 = GradedExpr.atom(theta1), GradedExpr.atom(theta2)
    F = lambda coeffs, name: SuperVectorField(coeffs, SUSY_COORDINATES, name)
    return {
        "D": F({x: 2 * x, y: 2 * y, theta1: t1, theta2: t2, Phi: 4 * Phi}, "D"),
        "P1": F({x: 1}, "P1"),
        "P2": F({y: 1}, "P2"),
        "P3": F({theta1: 1}, "P3"),
        "P4": F({theta2: 1}, "P4"),
        "P5": F({Phi: 1}, "P5"),
        "Q1": F({theta1: 1, x: -t1}, "Q1"),
        "Q2": F({theta2: 1, y: -t2}, "Q2"),
    }


def classical_generators() -> dict:
    """The seven point symmetries of the classical minimal surface equation."""
    F = lambda coeffs, name: SuperVectorField(coeffs, CLASSICAL_COORDINATES, name)
    return {
        "e1": F({x: 1}, "e1"),
        "e2": F({y: 1}, "e2"),
        "e3": F({u: 1}, "e3"),
        "e4": F({x: -y, y: x}, "e4"),
        "e5": F({y: -u, u: y}, "e5"),
        "e6": F({u: -x, x: u}, "e6"),
        "e7": F({x: x, y: y, u: u}, "e7"),
    }


# conventional display order of the susy table
TABLE1_ORDER = ("D", "P1", "P3", "Q1", "P2", "P4", "Q2", "P5")
CLASSICAL_ORDER = ("e1", "e2", "e3", "e4", "e5", "e6", "e7")


# -- structure tables ---------------------------------------------------------------

def format_combination(coeffs: dict, order) -> str:
    """``{"P1": -2}`` -> ``"-2*P1"``; empty -> ``"0"``."""
    parts = []
    for name in order:
        if name not in coeffs:
            continue
        c = as_graded(coeffs[name])
        if not c:
            continue
        if not c.odd_atoms() and c.body().is_number:
            v = c.body()
            if v == 1:
                parts.append(("+", name))
            elif v == -1:
                parts.append(("-", name))
            elif v < 0:
                parts.append(("-", f"{print_coefficient(-v)}*{name}"))
            else:
                parts.append(("+", f"{print_coefficient(v)}*{name}"))
        else:
            text = serialize(c)
            if len(c.terms) > 1 or text.startswith("-"):
                text = f"({text})"
            parts.append(("+", f"{text}*{name}"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, t in parts[1:]:
        out += f" {s} {t}"
    return out


@dataclass
class StructureTable:
    basis: list
    entries: dict  # (row, col) -> {name: Rational}
    parities: dict

    def kind(self, a, b) -> str:
        return "anticommutator" if self.parities[a] and self.parities[b] else "commutator"

    def cell(self, a, b) -> str:
        return format_combination(self.entries[(a, b)], self.basis)

    def nonzero(self):
        return {k: v for k, v in self.entries.items() if v}

    def to_dict(self, order=None) -> dict:
        order = list(order or self.basis)
        return {
            "schema": 1,
            "basis": order,
            "parity": {n: ("odd" if self.parities[n] else "even") for n in order},
            "rows": {a: {b: self.cell(a, b) for b in order} for a in order},
        }

    def to_json(self, order=None) -> str:
        return json.dumps(self.to_dict(order), indent=2, sort_keys=False)

    def to_latex(self, order=None) -> str:
        order = list(order or self.basis)

        def tex(s):
            return re.sub(r"([A-Za-z])(\d+)", r"\1_\2", s.replace("*", ""))

        head = " & " + " & ".join(f"$\\mathbf{{{tex(n)}}}$" for n in order)
        lines = [
            "\\begin{tabular}{|c||" + "c|" * len(order) + "}\\hline",
            head + " \\\\\\hline\\hline",
        ]
        for a in order:
            row = " & ".join(f"${tex(self.cell(a, b))}$" for b in order)
            lines.append(f"$\\mathbf{{{tex(a)}}}$ & {row} \\\\\\hline")
        lines.append("\\end{tabular}")
        return "\n".join(lines)

    def to_markdown(self, order=None) -> str:
        order = list(order or self.basis)
        lines = ["| | " + " | ".join(order) + " |", "|---" * (len(order) + 1) + "|"]
        for a in order:
            lines.append(f"| **{a}** | " + " | ".join(self.cell(a, b) for b in order) + " |")
        return "\n".join(lines)


def structure_table(basis: dict) -> StructureTable:
    """Bracket every ordered pair of basis fields and re-expand in the basis.

    Raises ClosureError if some bracket leaves the span.
    """
    names = list(basis)
    fields = [basis[n] for n in names]
    expander = BasisExpander(fields, names)
    parities = {n: basis[n].parity for n in names}
    entries = {}
    for a in names:
        for b in names:
            br = superbracket(basis[a], basis[b])
            coeffs = expander.expand(br) if not br.is_zero() else {}
            entries[(a, b)] = {k: v.body() for k, v in coeffs.items()}
    return StructureTable(names, entries, parities)


# -- abstract superalgebra with graded scalars -----------------------------------------

ODD_PARAMETERS = ("mu", "nu", "rho", "sigma", "eta", "lambda")
EVEN_PARAMETERS = ("alpha", "r", "k", "ell", "eps", "m", "t", "s", "a", "b", "c")


def _split_parity(c: GradedExpr):
    even = GradedExpr({k: v for k, v in c.items() if len(k) % 2 == 0})
    odd = GradedExpr({k: v for k, v in c.items() if len(k) % 2})
    return even, odd


class Element:
    """A finite combination ``sum_i c_i X_i`` of named generators."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs=None):
        self.algebra = algebra
        clean = {}
        for name, c in (coeffs or {}).items():
            if name not in algebra.parities:
                raise UsageError(f"unknown generator {name!r}")
            c = as_graded(c)
            if c:
                clean[name] = c
        self.coeffs = clean

    def coefficient(self, name) -> GradedExpr:
        return self.coeffs.get(name, GradedExpr.zero())

    def __add__(self, other):
        acc = dict(self.coeffs)
        for n, c in other.coeffs.items():
            acc[n] = acc.get(n, GradedExpr.zero()) + c
        return Element(self.algebra, acc)

    def __neg__(self):
        return Element(self.algebra, {n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        """Left multiplication by a graded constant."""
        a = as_graded(a)
        return Element(self.algebra, {n: gmul(a, c) for n, c in self.coeffs.items()})

    def __rmul__(self, a):
        return self.scale(a)

    def __truediv__(self, a):
        return Element(self.algebra, {n: c / a for n, c in self.coeffs.items()})

    def map_coefficients(self, fn):
        return Element(self.algebra, {n: fn(c) for n, c in self.coeffs.items()})

    def simplify(self):
        return self.map_coefficients(lambda c: c.simplify())

    def is_zero(self):
        return not self.coeffs

    def parity(self) -> str:
        """Total parity of the element (generator parity plus coefficient parity)."""
        found = set()
        for n, c in self.coeffs.items():
            p = parity_of(c)
            if p == "mixed":
                return "mixed"
            found.add(((1 if p == "odd" else 0) + self.algebra.parities[n]) % 2)
        if not found:
            return "zero"
        if len(found) > 1:
            return "mixed"
        return "odd" if found.pop() else "even"

    def support(self):
        return [n for n in self.algebra.names if n in self.coeffs]

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return format_combination(self.coeffs, self.algebra.display_order)


class LieSuperalgebra:
    """Structure constants computed from a basis of vector fields."""

    def __init__(self, basis: dict, display_order=None):
        self.fields = dict(basis)
        self.names = list(basis)
        self.table = structure_table(basis)
        self.parities = dict(self.table.parities)
        self.display_order = list(display_order or self.names)
        self._expander = None

    # constructors
    def element(self, coeffs=None, **kw) -> Element:
        coeffs = dict(coeffs or {})
        coeffs.update(kw)
        return Element(self, coeffs)

    def generator(self, name) -> Element:
        return Element(self, {name: 1})

    def parse(self, text: str) -> Element:
        """Read combinations such as ``"P1 + k*P2 + mu*P4"`` or ``"D - 2*eps*P1"``.

        Names in ODD_PARAMETERS become odd constants; every other symbol is even.
        """
        gens = "|".join(sorted(map(re.escape, self.names), key=len, reverse=True))
        pat = re.compile(r"\s*([+-])?\s*(?:(.+?)\s*\*\s*)??\b(" + gens + r")\b\s*")
        pos, acc = 0, {}
        text = text.strip()
        while pos < len(text):
            m = pat.match(text, pos)
            if not m or m.end() == pos:
                raise UsageError(f"cannot parse element {text!r} at {pos}")
            sign, coeff, gen = m.groups()
            c = _parse_coefficient(coeff) if coeff else GradedExpr.scalar(1)
            if sign == "-":
                c = -c
            acc[gen] = acc.get(gen, GradedExpr.zero()) + c
            pos = m.end()
        return Element(self, acc)

    # brackets
    def bracket(self, a: Element, b: Element) -> Element:
        """Graded bracket extended to graded-scalar coefficients.

        ``[aX, bY] = (-1)^(|X||b|) a b [X, Y]`` for homogeneous a, b.
        """
        acc = {}
        for X, ca in a.coeffs.items():
            for Y, cb in b.coeffs.items():
                sc = self.table.entries[(X, Y)]
                if not sc:
                    continue
                even, odd = _split_parity(cb)
                pref = gmul(ca, even - odd if self.parities[X] else even + odd)
                if not pref:
                    continue
                for Z, k in sc.items():
                    acc[Z] = acc.get(Z, GradedExpr.zero()) + k * pref
        return Element(self, acc)

    def to_vector_field(self, a: Element) -> SuperVectorField:
        coords = next(iter(self.fields.values())).coords
        out = SuperVectorField({}, coords)
        for n, c in a.coeffs.items():
            out = out + self.fields[n].scale(c)
        return out

    def from_vector_field(self, v: SuperVectorField) -> Element:
        if self._expander is None:
            self._expander = BasisExpander([self.fields[n] for n in self.names], self.names)
        return Element(self, self._expander.expand(v))

    def diagonal_weights(self, name):
        """Eigenvalues of ad(name) if it acts diagonally on the basis, else None."""
        weights = {}
        for n in self.names:
            sc = self.table.entries[(name, n)]
            if any(k != n for k in sc):
                return None
            weights[n] = sc.get(n, 0)
        return weights

    def adjoint_action(self, Y: Element, X: Element, max_depth=8) -> Element:
        """``Ad_exp(Y) X = X + [Y,X] + [Y,[Y,X]]/2! + ...``.

        A multiple of a diagonally acting generator is exponentiated exactly;
        otherwise the series must terminate within ``max_depth`` brackets.
        """
        if Y.is_zero():
            return X
        if len(Y.coeffs) == 1:
            (name, t), = Y.coeffs.items()
            w = self.diagonal_weights(name)
            if w is not None and not t.odd_atoms() and not self.parities[name]:
                t = t.body()
                return Element(self, {n: c * sp.exp(w[n] * t) for n, c in X.coeffs.items()})
        total, term = X, X
        for n in range(1, max_depth + 1):
            term = self.bracket(Y, term) / n
            if term.is_zero():
                return total
            total = total + term
        raise TruncationError(f"adjoint series of {Y} did not terminate within depth {max_depth}")

    def killing_form(self, names=None) -> sp.Matrix:
        """``K_ij = str(ad_i ad_j)`` restricted to the span of ``names``.

        The names must span a subalgebra.
        """
        names = list(names or self.names)
        idx = {n: i for i, n in enumerate(names)}
        ad = []
        for a in names:
            m = sp.zeros(len(names))
            for j, b in enumerate(names):
                for Z, k in self.table.entries[(a, b)].items():
                    if Z not in idx:
                        raise ClosureError(f"[{a},{b}] leaves span {names}")
                    m[idx[Z], j] = k
            ad.append(m)
        signs = [(-1) ** self.parities[n] for n in names]
        K = sp.zeros(len(names))
        for i in range(len(names)):
            for j in range(len(names)):
                prod = ad[i] * ad[j]
                K[i, j] = sum(signs[r] * prod[r, r] for r in range(len(names)))
        return K

    def in_span(self, e: Element, names) -> bool:
        return all(n in names for n in e.coeffs)


def _parse_coefficient(text: str) -> GradedExpr:
    factors = [f.strip() for f in text.split("*") if f.strip()]
    out = GradedExpr.scalar(1)
    for f in factors:
        if f in ODD_PARAMETERS:
            out = gmul(out, odd_const(f))
        else:
            out = gmul(out, GradedExpr.scalar(sp.sympify(f, locals={"lambda": sp.Symbol("lambda")})))
    return out


_SUSY = None
_CLASSICAL = None


def susy_algebra() -> LieSuperalgebra:
    global _SUSY
    if _SUSY is None:
        _SUSY = LieSuperalgebra(susy_generators(), ("D", "P1", "P2", "P5", "P3", "P4", "Q1", "Q2"))
    return _SUSY


def classical_algebra() -> LieSuperalgebra:
    global _CLASSICAL
    if _CLASSICAL is None:
        _CLASSICAL = LieSuperalgebra(classical_generators(), CLASSICAL_ORDER)
    return _CLASSICAL


# -- decomposition checks -----------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class DecompositionReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append(CheckResult(name, bool(ok), detail))


def _bracket_in(alg, a, b, span):
    br = alg.table.entries[(a, b)]
    return all(k in span for k in br), br


def verify_decomposition() -> DecompositionReport:
    """Check the block structure of both symmetry algebras.

    SUSY: {D} semidirect {{P1,P3,Q1} + {P2,P4,Q2} + {P5}}.
    Classical: {{e4,e5,e6} semidirect {e1,e2,e3}} semidirect {e7}.
    """
    rep = DecompositionReport()
    alg = susy_algebra()
    blocks = [("P1", "P3", "Q1"), ("P2", "P4", "Q2"), ("P5",)]
    for blk in blocks:
        for a in blk:
            for b in blk:
                ok, br = _bracket_in(alg, a, b, blk)
                rep.add(f"closure {blk}: [{a},{b}]", ok, format_combination(br, alg.names))
    for i, bi in enumerate(blocks):
        for bj in blocks[i + 1:]:
            for a in bi:
                for b in bj:
                    br = alg.table.entries[(a, b)]
                    rep.add(f"direct {bi}x{bj}: [{a},{b}] = 0", not br, format_combination(br, alg.names))
    for blk in blocks:
        for a in blk:
            ok, br = _bracket_in(alg, "D", a, blk)
            rep.add(f"D preserves {blk}: [D,{a}]", ok, format_combination(br, alg.names))

    calg = classical_algebra()
    A, B = ("e4", "e5", "e6"), ("e1", "e2", "e3")
    for a in A:
        for b in A:
            ok, br = _bracket_in(calg, a, b, A)
            rep.add(f"closure {A}: [{a},{b}]", ok, format_combination(br, calg.names))
    for a in A + B:
        for b in B:
            ok, br = _bracket_in(calg, a, b, B)
            rep.add(f"ideal {B}: [{a},{b}]", ok, format_combination(br, calg.names))
    for a in A + B:
        ok, br = _bracket_in(calg, "e7", a, A + B)
        rep.add(f"ideal {A + B}: [e7,{a}]", ok, format_combination(br, calg.names))
    K = calg.killing_form(A)
    neg = all(ev < 0 for ev in K.eigenvals())
    rep.add("Killing form on {e4,e5,e6} negative definite", neg, str(K.tolist()))
    return rep


def table_from_golden(data: dict, algebra: LieSuperalgebra) -> dict:
    """Parse a golden table ``{"rows": {a: {b: "..."}}}`` into structure constants."""
    out = {}
    for a, row in data["rows"].items():
        for b, text in row.items():
            e = algebra.parse(text) if text.strip() != "0" else algebra.element()
            out[(a, b)] = {n: c.body() for n, c in e.coeffs.items()}
    return out
