"""Deterministic text form of graded expressions.

The output is accepted by :func:`susyms.parser.parse_expression`, so
``parse(serialize(e)) == e`` for canonical ``e``.
"""

import sympy as sp
from sympy.core.function import AppliedUndef
from sympy.printing.str import StrPrinter

from .grassmann import GradedExpr, OddAtom, as_graded


class _Printer(StrPrinter):
    _default_settings = dict(StrPrinter._default_settings, order="lex")

    def _print_Derivative(self, expr):
        variables = []
        for v, n in expr.variable_count:
            variables.extend([self._print(v)] * n)
        return "diff(%s, %s)" % (self._print(expr.expr), ", ".join(variables))

    def _print_ImaginaryUnit(self, expr):
        return "I"

    def _print_log(self, expr):
        return "ln(%s)" % self._print(expr.args[0])

    def _print_Function(self, expr):
        if isinstance(expr, AppliedUndef):
            return "%s(%s)" % (expr.func.__name__, ", ".join(self._print(a) for a in expr.args))
        return super()._print_Function(expr)


_printer = _Printer()


def print_coefficient(c) -> str:
    return _printer.doprint(c)


def print_odd(atom: OddAtom) -> str:
    if atom.kind != "jet":
        return atom.name
    field, dx, dy, t1, t2 = atom.jet
    name = field + ("_t" + ("1" if t1 else "") + ("2" if t2 else "") if (t1 or t2) else "")
    core = f"{name}(x, y)"
    variables = ["x"] * dx + ["y"] * dy
    if variables:
        return "diff(%s, %s)" % (core, ", ".join(variables))
    return core


def term_order(key):
    return (len(key), tuple(a.sort_key for a in key))


def serialize(e) -> str:
    """Sorted, byte-stable text of a canonical expression."""
    e = as_graded(e)
    if not e.terms:
        return "0"
    parts = []
    for key in sorted(e.terms, key=term_order):
        coeff = e.terms[key]
        odd = "*".join(print_odd(a) for a in key)
        if not key:
            parts.append(print_coefficient(coeff))
            continue
        if coeff == 1:
            parts.append(odd)
        elif coeff == -1:
            parts.append("-" + odd)
        else:
            text = print_coefficient(coeff)
            if isinstance(coeff, sp.Add):
                text = "(" + text + ")"
            parts.append(text + "*" + odd)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out
