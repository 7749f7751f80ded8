"""Text grammar for graded expressions.

    source  := decl* expr
    decl    := ("odd" | "even") NAME ("," NAME)* ";"
    expr    := ["+"|"-"] term (("+"|"-") term)*
    term    := power (("*"|"/") power)*
    power   := unary (("**"|"^") power)?
    unary   := ("-"|"+") unary | atom
    atom    := NUMBER | NAME | NAME "(" expr ("," expr)* ")" | "(" expr ")"

Predeclared names: x, y, xi, t (even coordinates), theta1, theta2, eta1, eta2
(odd coordinates), I, pi.  Fields such as u(x, y), phi(x, y), Phi_t1(x, y)
take their parity from the field table; ``diff(e, v, ...)`` differentiates.
Every other name must be declared.  ``serialize`` output parses back to the
same canonical expression.
"""

import re
from dataclasses import dataclass

import sympy as sp

from .errors import ExpressionSyntaxError, ParityError, SusyError
from .grassmann import (FIELD_PARITY, SUPERFIELDS, GradedExpr, as_graded, eta1, eta2, gfunc,
                        ginverse, odd_const, parity_of, theta1, theta2)
from .supercalculus import jet, jet_parity, partial_derivative, x, y

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^(),;])
""", re.VERBOSE)

FUNCTIONS = {
    "sqrt": sp.sqrt, "ln": sp.log, "log": sp.log, "exp": sp.exp,
    "sin": sp.sin, "cos": sp.cos, "tan": sp.tan, "asin": sp.asin, "acos": sp.acos,
    "atan": sp.atan, "sinh": sp.sinh, "cosh": sp.cosh, "Abs": sp.Abs, "re": sp.re, "im": sp.im,
    "elliptic_f": sp.elliptic_f, "elliptic_e": sp.elliptic_e,
    # Legendre form with modulus k: F(phi, k) = elliptic_f(phi, k^2)
    "EllipticF": lambda p, k: sp.elliptic_f(p, k ** 2),
    "EllipticE": lambda p, k: sp.elliptic_e(p, k ** 2),
}

EVEN_NAMES = {"x": x, "y": y, "xi": sp.Symbol("xi"), "t": sp.Symbol("t"), "I": sp.I, "pi": sp.pi}
ODD_NAMES = {"theta1": theta1, "theta2": theta2, "eta1": eta1, "eta2": eta2}
KEYWORDS = {"odd", "even", "diff"}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str):
    out, line, start, pos = [], 1, 0, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ExpressionSyntaxError(f"unexpected character {src[pos]!r}", line, pos - start + 1,
                                        _line_text(src, line))
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind != "ws":
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("end", "", line, pos - start + 1))
    return out


def _line_text(src, line):
    lines = src.split("\n")
    return lines[line - 1] if 0 < line <= len(lines) else ""


def _field_name(name):
    """(field, t1, t2) for names like Phi, u, Phi_t12; None otherwise."""
    field, t1, t2 = name, 0, 0
    if "_t" in name:
        field, flags = name.split("_t", 1)
        if flags not in ("1", "2", "12"):
            return None
        t1, t2 = int("1" in flags), int("2" in flags)
        if field not in SUPERFIELDS:
            return None
    return (field, t1, t2) if field in FIELD_PARITY else None


class Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.i = 0
        self.even = {}
        self.odd = {}

    # token helpers
    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ExpressionSyntaxError(msg, tok.line, tok.col, _line_text(self.src, tok.line))

    def accept(self, text):
        if self.tok.text == text and self.tok.kind in ("op", "name"):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")

    # grammar
    def parse(self) -> GradedExpr:
        while self.tok.text in ("odd", "even") and self.tok.kind == "name":
            self.declaration()
        if self.tok.kind == "end":
            raise self.error("empty expression")
        e = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def declaration(self):
        kind = self.tok.text
        self.i += 1
        while True:
            tok = self.tok
            if tok.kind != "name" or tok.text in KEYWORDS:
                raise self.error("expected a name in declaration")
            self.i += 1
            self.declare(kind, tok)
            if not self.accept(","):
                break
        self.expect(";")

    def declare(self, kind, tok):
        name = tok.text
        if name in EVEN_NAMES or name in ODD_NAMES or name in FUNCTIONS:
            raise self.error(f"{name!r} is predefined", tok)
        info = _field_name(name)
        if info is not None:
            if jet_parity(*info) != (kind == "odd"):
                raise ParityError(f"field {name} is {'odd' if jet_parity(*info) else 'even'}, declared {kind}")
            return
        other = self.even if kind == "odd" else self.odd
        if name in other:
            raise self.error(f"{name!r} is already declared {'even' if kind == 'odd' else 'odd'}", tok)
        if kind == "odd":
            self.odd[name] = odd_const(name)
        else:
            self.even[name] = sp.Symbol(name)

    def expr(self):
        if self.accept("-"):
            out = -self.term()
        else:
            self.accept("+")
            out = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.power()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op, tok = self.tok.text, self.tok
            self.i += 1
            rhs = self.power()
            out = out * rhs if op == "*" else self.divide(out, rhs, tok)
        return out

    def power(self):
        base = self.unary()
        if self.tok.text in ("**", "^") and self.tok.kind == "op":
            tok = self.tok
            self.i += 1
            exp = self.power()
            return self.raise_power(base, exp, tok)
        return base

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.atom()

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return GradedExpr.scalar(sp.Rational(tok.text))
        if tok.text == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind != "name":
            raise self.error(f"unexpected {tok.text or 'end of input'!r}")
        self.i += 1
        name = tok.text
        if self.tok.text == "(":
            return self.call(name, tok)
        if name in self.even:
            return GradedExpr.scalar(self.even[name])
        if name in self.odd:
            return GradedExpr.atom(self.odd[name])
        if name in EVEN_NAMES:
            return GradedExpr.scalar(EVEN_NAMES[name])
        if name in ODD_NAMES:
            return GradedExpr.atom(ODD_NAMES[name])
        raise self.error(f"undeclared name {name!r}", tok)

    def arguments(self):
        self.expect("(")
        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        self.expect(")")
        return args

    def call(self, name, tok):
        if name == "diff":
            return self.diff(tok)
        info = _field_name(name)
        if info is not None:
            args = self.arguments()
            if args != [GradedExpr.scalar(x), GradedExpr.scalar(y)]:
                raise self.error(f"field {name} must be applied to (x, y)", tok)
            field, t1, t2 = info
            return jet(field, 0, 0, t1, t2)
        if name not in FUNCTIONS:
            raise self.error(f"unknown function {name!r}", tok)
        fn = FUNCTIONS[name]
        args = self.arguments()
        if len(args) == 1:
            return gfunc(fn, args[0])
        if any(a.odd_atoms() for a in args):
            raise ParityError(f"{name} with several arguments needs purely even arguments")
        return GradedExpr.scalar(fn(*(a.body() for a in args)))

    def diff(self, tok):
        self.expect("(")
        e = self.expr()
        while self.accept(","):
            vt = self.tok
            if vt.kind != "name":
                raise self.error("expected a differentiation variable")
            self.i += 1
            var = ODD_NAMES.get(vt.text) or EVEN_NAMES.get(vt.text) or self.even.get(vt.text)
            if var is None or var in (sp.I, sp.pi):
                raise self.error(f"cannot differentiate with respect to {vt.text!r}", vt)
            try:
                e = partial_derivative(e, var)
            except SusyError as exc:
                raise self.error(str(exc), vt) from exc
        self.expect(")")
        return e

    def divide(self, a, b, tok):
        if not b.odd_atoms():
            if b.body() == 0:
                raise self.error("division by zero", tok)
            return a / b.body()
        return a * ginverse(b)

    def raise_power(self, base, exp, tok):
        if exp.odd_atoms():
            raise ParityError("exponent must be even and body-only")
        n = exp.body()
        if not base.odd_atoms():
            return GradedExpr.scalar(base.body() ** n)
        if n.is_Integer and n >= 0:
            return base ** int(n)
        if n.is_Integer:
            return ginverse(base) ** int(-n)
        if parity_of(base) != "even":
            raise ParityError("fractional power of a non-even expression")
        return gfunc(lambda z: z ** n, base)


def parse_expression(src: str) -> GradedExpr:
    """Parse source text into a canonical graded expression."""
    return Parser(src).parse()


def declarations_for(e) -> str:
    """Declaration header making ``serialize(e)`` parseable on its own."""
    e = as_graded(e)
    odd = sorted({a.name for a in e.odd_atoms() if a.kind == "const"})
    even = sorted(s.name for s in e.free_symbols() if s.name not in EVEN_NAMES)
    parts = []
    if odd:
        parts.append("odd " + ", ".join(odd) + ";")
    if even:
        parts.append("even " + ", ".join(even) + ";")
    return " ".join(parts)


def to_source(e) -> str:
    from .serialize import serialize
    head = declarations_for(e)
    return (head + " " if head else "") + serialize(e)
