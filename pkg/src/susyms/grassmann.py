"""Exact arithmetic over a Grassmann algebra with commuting sympy coefficients.

A :class:`GradedExpr` is stored as a map ``odd-monomial -> even coefficient``.
The odd monomial is a strictly increasing tuple of :class:`OddAtom` (under the
global odd order) and the coefficient is an expanded sympy expression in the
even atoms (coordinates, even constants, ``I``, function atoms, even jets).
Reordering odd atoms multiplies by the permutation sign; repeated odd atoms
annihilate the monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import factorial
from typing import Iterable, Mapping

import sympy as sp

from .errors import ParityError, UsageError

# base parity of every field symbol that may carry derivatives
FIELD_PARITY = {
    "Phi": 0, "Psi": 0, "v": 0, "phi": 1, "psi": 1, "u": 0,
    "W": 0, "omega": 0, "f": 0, "g": 0,
}
# fields that depend on the odd coordinates (theta-derivatives allowed)
SUPERFIELDS = frozenset({"Phi", "Psi"})
FIELD_RANK = {name: i for i, name in enumerate(FIELD_PARITY)}

_KIND_RANK = {"theta": 0, "eta": 1, "const": 2, "jet": 3}


@dataclass(frozen=True)
class OddAtom:
    """An odd generator: odd coordinate, odd constant or odd derivative symbol."""

    name: str
    kind: str = "const"
    jet: tuple | None = None  # (field, dx, dy, t1, t2) for kind == "jet"

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise UsageError(f"unknown odd atom kind {self.kind!r}")

    @property
    def sort_key(self):
        if self.kind == "jet":
            field, dx, dy, t1, t2 = self.jet
            return (3, FIELD_RANK.get(field, 99), field, dx, dy, t1, t2)
        return (_KIND_RANK[self.kind], _natural_key(self.name))

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __repr__(self):
        return self.name

    # arithmetic promotes to GradedExpr
    def __mul__(self, other):
        return GradedExpr.atom(self) * other

    def __rmul__(self, other):
        return as_graded(other) * GradedExpr.atom(self)

    def __add__(self, other):
        return GradedExpr.atom(self) + other

    __radd__ = __add__

    def __sub__(self, other):
        return GradedExpr.atom(self) - other

    def __rsub__(self, other):
        return as_graded(other) - GradedExpr.atom(self)

    def __neg__(self):
        return -GradedExpr.atom(self)


def _natural_key(name):
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return (head, int(tail) if tail else -1, name)


theta1 = OddAtom("theta1", "theta")
theta2 = OddAtom("theta2", "theta")
eta1 = OddAtom("eta1", "eta")
eta2 = OddAtom("eta2", "eta")


def odd_const(name: str) -> OddAtom:
    return OddAtom(name, "const")


def odd_consts(names: str):
    return tuple(odd_const(n) for n in names.replace(",", " ").split())


def _sort_with_sign(atoms):
    """Sort odd atoms, returning (sign, tuple) or (0, None) on repetition."""
    items = list(atoms)
    sign = 1
    # insertion sort: every adjacent swap flips the sign
    for i in range(1, len(items)):
        j = i
        while j > 0:
            a, b = items[j - 1], items[j]
            if a == b:
                return 0, None
            if b.sort_key < a.sort_key:
                items[j - 1], items[j] = b, a
                sign = -sign
                j -= 1
            else:
                break
    for a, b in zip(items, items[1:]):
        if a == b:
            return 0, None
    return sign, tuple(items)


def _merge_sign(left, right):
    """Sign of sorting left+right (both sorted) or 0 if they share an atom."""
    if not left or not right:
        return 1
    inversions = 0
    for b in right:
        kb = b.sort_key
        for a in left:
            if a == b:
                return 0
            if a.sort_key > kb:
                inversions += 1
    return -1 if inversions % 2 else 1


def _canon(c):
    return sp.expand(c)


class GradedExpr:
    """Canonical element of (commutative coefficients) x (Grassmann algebra)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None, *, _canonical=False):
        if terms is None:
            terms = {}
        if _canonical:
            self._terms = dict(terms)
        else:
            acc = {}
            for key, coeff in terms.items():
                sign, skey = _sort_with_sign(key)
                if sign == 0:
                    continue
                acc[skey] = acc.get(skey, 0) + sign * sp.sympify(coeff)
            self._terms = {k: c for k, c in ((k, _canon(c)) for k, c in acc.items()) if c != 0}
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def scalar(cls, value) -> "GradedExpr":
        value = _canon(sp.sympify(value))
        return cls({(): value} if value != 0 else {}, _canonical=True)

    @classmethod
    def atom(cls, a: OddAtom) -> "GradedExpr":
        return cls({(a,): sp.Integer(1)}, _canonical=True)

    @classmethod
    def zero(cls) -> "GradedExpr":
        return cls({}, _canonical=True)

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, odd=()) -> sp.Expr:
        """Even coefficient of the odd monomial ``odd`` (given in any order)."""
        sign, key = _sort_with_sign(odd)
        if sign == 0:
            return sp.Integer(0)
        return sign * self._terms.get(key, sp.Integer(0))

    def body(self) -> sp.Expr:
        return self._terms.get((), sp.Integer(0))

    def soul(self) -> "GradedExpr":
        return GradedExpr({k: c for k, c in self._terms.items() if k}, _canonical=True)

    def odd_atoms(self):
        return sorted({a for k in self._terms for a in k}, key=lambda a: a.sort_key)

    def free_symbols(self):
        out = set()
        for c in self._terms.values():
            out |= c.free_symbols
        return out

    def is_zero(self, simplify=False) -> bool:
        if not self._terms:
            return True
        if not simplify:
            return False
        return all(sp.simplify(c) == 0 for c in self._terms.values())

    def parity(self) -> str:
        return parity_of(self)

    def __bool__(self):
        return bool(self._terms)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = as_graded(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + c
        return GradedExpr({k: v for k, v in ((k, _canon(v)) for k, v in acc.items()) if v != 0},
                          _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return GradedExpr({k: -c for k, c in self._terms.items()}, _canonical=True)

    def __sub__(self, other):
        return self + (-as_graded(other))

    def __rsub__(self, other):
        return as_graded(other) - self

    def __mul__(self, other):
        return gmul(self, other)

    def __rmul__(self, other):
        return gmul(as_graded(other), self)

    def __truediv__(self, other):
        other = sp.sympify(other)
        return self.map_coefficients(lambda c: c / other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise UsageError("only non-negative integer powers are supported")
        return reduce(gmul, [self] * n, GradedExpr.scalar(1))

    def map_coefficients(self, fn, expand=True) -> "GradedExpr":
        """Apply ``fn`` to every coefficient; ``expand=False`` keeps the
        results as returned (zeros are still dropped)."""
        if expand:
            return GradedExpr({k: fn(c) for k, c in self._terms.items()})
        out = {k: sp.sympify(fn(c)) for k, c in self._terms.items()}
        return GradedExpr({k: c for k, c in out.items() if c != 0}, _canonical=True)

    def simplify(self, fn=sp.simplify) -> "GradedExpr":
        return self.map_coefficients(fn)

    def subs(self, *args, **kwargs) -> "GradedExpr":
        """sympy ``subs`` on the even coefficients only."""
        return self.map_coefficients(lambda c: c.subs(*args, **kwargs))

    def xreplace(self, rule) -> "GradedExpr":
        return self.map_coefficients(lambda c: c.xreplace(rule))

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        try:
            other = as_graded(other)
        except (TypeError, sp.SympifyError):
            return NotImplemented
        return self._terms == other._terms

    def equals(self, other) -> bool:
        """Equality up to sympy simplification of each coefficient."""
        return (self - as_graded(other)).is_zero(simplify=True)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        from .serialize import serialize
        return serialize(self)

    __str__ = __repr__


def as_graded(value) -> GradedExpr:
    if isinstance(value, GradedExpr):
        return value
    if isinstance(value, OddAtom):
        return GradedExpr.atom(value)
    return GradedExpr.scalar(value)


def gmul(a, b) -> GradedExpr:
    """Graded (super)commutative product with sign bookkeeping."""
    a, b = as_graded(a), as_graded(b)
    acc = {}
    for ka, ca in a._terms.items():
        for kb, cb in b._terms.items():
            sign = _merge_sign(ka, kb)
            if sign == 0:
                continue
            key = tuple(sorted(ka + kb, key=lambda t: t.sort_key))
            acc[key] = acc.get(key, 0) + sign * ca * cb
    return GradedExpr({k: v for k, v in ((k, _canon(v)) for k, v in acc.items()) if v != 0},
                      _canonical=True)


def parity_of(e) -> str:
    """Grading class of ``e``: 'even', 'odd', 'mixed' or 'zero'."""
    e = as_graded(e)
    parities = {len(k) % 2 for k in e._terms}
    if not parities:
        return "zero"
    if parities == {0}:
        return "even"
    if parities == {1}:
        return "odd"
    return "mixed"


def parity_bit(e) -> int:
    """0 for even (or zero) expressions, 1 for odd; mixed raises."""
    p = parity_of(e)
    if p == "mixed":
        raise ParityError(f"expression of mixed parity: {e}")
    return 1 if p == "odd" else 0


# -- raw trees -----------------------------------------------------------------

def normalize(raw) -> GradedExpr:
    """Canonical form of a raw expression tree.

    Leaves are :class:`GradedExpr`, :class:`OddAtom` or anything sympy can
    sympify.  Inner nodes are tuples ``("+", *args)``, ``("*", *args)``,
    ``("-", arg)`` and ``("fn", f, arg)`` where ``f`` is a sympy function
    applied to an even argument.  Products keep the literal factor order.
    """
    if isinstance(raw, tuple):
        op, *args = raw
        if op == "+":
            return reduce(lambda s, t: s + normalize(t), args, GradedExpr.zero())
        if op == "*":
            return reduce(lambda s, t: gmul(s, normalize(t)), args, GradedExpr.scalar(1))
        if op == "-":
            if len(args) == 1:
                return -normalize(args[0])
            return normalize(args[0]) - normalize(args[1])
        if op == "fn":
            return gfunc(args[0], normalize(args[1]))
        raise UsageError(f"unknown node {op!r}")
    return as_graded(raw)


def gfunc(fn, arg) -> GradedExpr:
    """Apply an even function atom to an even graded argument by Taylor expansion.

    ``f(b + n) = sum_k f^(k)(b) n^k / k!`` terminates because the soul ``n``
    is nilpotent.
    """
    arg = as_graded(arg)
    if parity_of(arg) in ("odd", "mixed"):
        raise ParityError(f"function atom {fn} applied to non-even argument {arg}")
    body = arg.body()
    soul = arg.soul()
    z = sp.Dummy("z")
    fz = fn(z)
    out = GradedExpr.scalar(fz.subs(z, body))
    power = GradedExpr.scalar(1)
    k = 0
    while True:
        power = gmul(power, soul)
        k += 1
        if not power:
            return out
        deriv = sp.diff(fz, z, k).subs(z, body) / factorial(k)
        out = out + gmul(GradedExpr.scalar(deriv), power)


def ginverse(e) -> GradedExpr:
    """Multiplicative inverse of an even element with invertible body."""
    e = as_graded(e)
    if parity_of(e) in ("odd", "mixed"):
        raise ParityError("only even elements can be inverted")
    if e.body() == 0:
        raise UsageError("element with zero body is not invertible")
    return gfunc(lambda z: 1 / z, e)


def _is_even_key(key):
    return isinstance(key, sp.Basic)


def gsubstitute(e, bindings: Mapping) -> GradedExpr:
    """Simultaneous substitution of atoms by graded expressions.

    Odd atoms (:class:`OddAtom`) must map to odd expressions; even atoms
    (sympy symbols, applied functions or derivatives) to even ones.  Even
    atoms bound to values with a nilpotent soul are expanded by Taylor's
    formula in the coefficient ring.
    """
    e = as_graded(e)
    odd_map, even_map = {}, {}
    for key, val in bindings.items():
        val = as_graded(val)
        p = parity_of(val)
        if isinstance(key, OddAtom):
            if p not in ("odd", "zero"):
                raise ParityError(f"odd atom {key} bound to {p} value {val}")
            odd_map[key] = val
        elif _is_even_key(key):
            if p not in ("even", "zero"):
                raise ParityError(f"even atom {key} bound to {p} value {val}")
            even_map[key] = val
        else:
            raise UsageError(f"cannot substitute for {key!r}")

    plain = {k: v.body() for k, v in even_map.items() if not v.soul()}
    nilpotent = {k: v for k, v in even_map.items() if v.soul()}
    bodies = {k: v.body() for k, v in nilpotent.items()}
    bodies.update(plain)

    out = GradedExpr.zero()
    for key, coeff in e.items():
        if nilpotent and coeff.has(*nilpotent):
            part = _taylor_substitute(coeff, nilpotent, bodies)
        else:
            part = GradedExpr.scalar(coeff.xreplace(bodies) if bodies else coeff)
        for atom in key:
            part = gmul(part, odd_map.get(atom, GradedExpr.atom(atom)))
        out = out + part
    return out


def _taylor_substitute(coeff, nilpotent, bodies):
    souls = {k: v.soul() for k, v in nilpotent.items()}
    term = GradedExpr.scalar(coeff)
    total = term
    k = 0
    while term:
        k += 1
        nxt = GradedExpr.zero()
        for key, soul in souls.items():
            nxt = nxt + gmul(soul, term.map_coefficients(lambda c, key=key: sp.diff(c, key)))
        term = nxt / k
        total = total + term
    return total.map_coefficients(lambda c: c.xreplace(bodies))


def grassmann_sum(items: Iterable) -> GradedExpr:
    return reduce(lambda s, t: s + as_graded(t), items, GradedExpr.zero())
