"""Symmetry reduction of the SUSY MS equation and verification of solutions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .classification import family_element, representative
from .errors import DomainError, ReductionError, UnsupportedSubalgebra, UsageError
from .grassmann import GradedExpr, as_graded, gmul, odd_const, theta1, theta2
from .superalgebra import Phi, susy_algebra
from .supercalculus import substitute_field, susy_ms_residual, x, y

xi = sp.Symbol("xi")
w = sp.Function("w")
eps, k = sp.symbols("eps k")
mu = odd_const("mu")


@dataclass
class InvariantSet:
    label: str
    element: object
    invariants: dict
    orbit: str

    @property
    def vector_field(self):
        return susy_algebra().to_vector_field(self.element)

    def check(self) -> dict:
        """Apply the generator to every invariant; all results must vanish."""
        X = self.vector_field
        return {name: X(inv).map_coefficients(sp.simplify) for name, inv in self.invariants.items()}

    def annihilated(self) -> bool:
        return all(not v for v in self.check().values())


def _scaling_invariants(xi_expr, shift=None):
    t1 = GradedExpr.atom(theta1) + (shift if shift is not None else 0)
    root = 1 / sp.sqrt(x)
    return {
        "xi": GradedExpr.scalar(xi_expr),
        "eta1": root * t1,
        "eta2": root * GradedExpr.atom(theta2),
        "Psi": GradedExpr.scalar(Phi / x ** 2),
    }


def invariants_for(label: str) -> InvariantSet:
    """Invariants of the worked subalgebras L1, L4, L8, L72, L74 and G136."""
    label = label.strip()
    if label == "L1":
        inv = {"y": y, "theta1": theta1, "theta2": theta2, "Phi": Phi}
        orbit = "Phi = Phi(y, theta1, theta2)"
    elif label == "L4":
        inv = {"y": y, "eta": GradedExpr.atom(theta1) - mu * x, "theta2": theta2, "Phi": Phi}
        orbit = "Phi = Phi(y, eta, theta2)"
    elif label == "L8":
        inv = {"xi": y - k * x, "theta1": theta1, "theta2": theta2, "Phi": Phi}
        orbit = "Phi = Phi(xi, theta1, theta2)"
    elif label == "L72":
        inv = _scaling_invariants(y / x)
        orbit = "Phi = x^2*Psi(xi, eta1, eta2)"
    elif label == "L74":
        inv = _scaling_invariants(y / x, GradedExpr.atom(mu))
        orbit = "Phi = x^2*Psi(xi, eta1, eta2)"
    elif label == "G136":
        inv = _scaling_invariants((2 * y + eps) / x)
        orbit = "Phi = x^2*Psi(xi, eta1, eta2)"
    else:
        cls = representative(label) if label[:1] in "GL" else None
        if cls is not None and not cls.standard:
            raise UnsupportedSubalgebra(f"{label} has non-standard invariants")
        raise UnsupportedSubalgebra(f"no stored invariants for {label}")
    cls = representative(label)
    element = family_element(cls.support)
    return InvariantSet(label, element, {n: as_graded(v) for n, v in inv.items()}, orbit)


# -- bodiless reduction ------------------------------------------------------------

PRINTED_ODES = {
    "L74": "(w^2 + xi^2 + 1)*w'' = 0",
    "G136": "(2*xi*w*w' + 6*w^2 + xi^2 + 4)*w'' = 0",
}


def bodiless_ansatz(label: str) -> GradedExpr:
    """``Phi = x^2 * w(xi) * eta1 * eta2`` for a scaling subalgebra."""
    if label not in ("L72", "L74", "G136"):
        raise UnsupportedSubalgebra(f"bodiless reduction is implemented for L72, L74, G136, not {label}")
    inv = invariants_for(label).invariants
    body = x ** 2 * w(inv["xi"].body())
    return gmul(GradedExpr.scalar(body), gmul(inv["eta1"], inv["eta2"]))


def _jet_symbols(expr):
    """Replace w(xi) and its derivatives by plain symbols w, w', w''."""
    expr = expr.doit()
    rep = {}
    for d in expr.atoms(sp.Derivative):
        if d.expr == w(xi):
            n = sum(c for _, c in d.variable_count)
            rep[d] = sp.Symbol("w" + "'" * n)
    expr = expr.xreplace(rep)
    return expr.xreplace({w(xi): sp.Symbol("w")})


_W_ORDER = ("xi", "w", "w'", "w''", "w'''")


def _print_factor(poly_expr):
    syms = [s for s in (sp.Symbol(n) for n in _W_ORDER) if poly_expr.has(s)]
    if not syms:
        return sp.sstr(poly_expr)
    poly = sp.Poly(poly_expr, *syms)
    deg_rank = {s: i for i, s in enumerate(syms)}
    terms = sorted(poly.terms(), key=lambda t: (-sum(t[0]), [-t[0][deg_rank[s]] for s in reversed(syms)]))
    parts = []
    for monom, c in terms:
        factors = []
        for s, e in zip(syms, monom):
            if e == 1:
                factors.append(s.name)
            elif e > 1:
                factors.append(f"{s.name}^{e}")
        mono = "*".join(factors)
        if not mono:
            text = sp.sstr(abs(c))
        elif abs(c) == 1:
            text = mono
        else:
            text = f"{sp.sstr(abs(c))}*{mono}"
        parts.append(("-" if c < 0 else "+", text))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, t in parts[1:]:
        out += f" {s} {t}"
    return out


def ode_text(lhs) -> str:
    """Canonical text ``(factor)*(factor) = 0`` with constants and signs removed."""
    lhs = sp.factor(lhs)
    _, factors = sp.factor_list(lhs)
    named = []
    for f, mult in factors:
        if not f.free_symbols & {sp.Symbol(n) for n in _W_ORDER[1:]}:
            continue  # powers of xi or x
        lc = sp.Poly(f, *sorted(f.free_symbols, key=str)).LC()
        f = sp.expand(f / lc) if lc.is_number and lc < 0 else f
        text = _print_factor(sp.expand(f))
        if " " in text or "-" in text[1:]:
            text = f"({text})"
        named.extend([text] * mult)
    # multi-term factors first, bare jets last
    named.sort(key=lambda t: (not t.startswith("("), t.count("'"), t))
    return "*".join(named) + " = 0" if named else "0 = 0"


def parse_ode_text(text: str):
    lhs = text.split("=")[0]
    for n in ("w'''", "w''", "w'"):
        lhs = lhs.replace(n, "W" + str(n.count("'")))
    lhs = lhs.replace("^", "**")
    syms = {"xi": sp.Symbol("xi"), "w": sp.Symbol("w"),
            "W1": sp.Symbol("w'"), "W2": sp.Symbol("w''"), "W3": sp.Symbol("w'''")}
    return sp.sympify(lhs, locals=syms)


@dataclass
class ReducedODE:
    label: str
    lhs: sp.Expr  # in symbols xi, w, w', w''
    x_power: sp.Expr
    residual: GradedExpr = field(repr=False, default=None)

    @property
    def text(self) -> str:
        return ode_text(self.lhs)

    def matches(self, other_text: str) -> bool:
        """True when ``other_text`` differs from this ODE by a constant factor."""
        ratio = sp.simplify(self.lhs / parse_ode_text(other_text))
        return ratio != 0 and not ratio.free_symbols

    def as_function_ode(self):
        """The left-hand side with w(xi) restored (for dsolve / substitution)."""
        rep = {sp.Symbol("w"): w(xi)}
        for n in (1, 2, 3):
            rep[sp.Symbol("w" + "'" * n)] = sp.Derivative(w(xi), (xi, n))
        return self.lhs.xreplace(rep)


def reduce_bodiless(label: str, residual=None) -> ReducedODE:
    """Substitute the bodiless ansatz and extract the ODE for w(xi).

    The residual must be a multiple of eta1*eta2 (i.e. of the theta-part of
    (theta1 + shift)*theta2); anything else raises ReductionError.
    """
    Phi_val = bodiless_ansatz(label)
    R = susy_ms_residual("component") if residual is None else residual
    res = substitute_field(R, Phi_val).map_coefficients(sp.simplify)
    inv = invariants_for(label).invariants
    pair = gmul(inv["eta1"], inv["eta2"]) * x  # (theta1 + shift)*theta2
    lead = pair.coefficient((theta1, theta2))
    G = sp.simplify(res.coefficient((theta1, theta2)) / lead)
    stray = (res - gmul(GradedExpr.scalar(G), pair)).map_coefficients(sp.simplify)
    if stray:
        raise ReductionError(f"residual of {label} is not proportional to eta1*eta2", stray)
    xi_expr = inv["xi"].body()
    ysol = sp.solve(sp.Eq(xi, xi_expr), y)[0]
    H = G.subs(y, ysol)
    H = _jet_symbols(sp.simplify(H.doit()))
    H = sp.factor(sp.simplify(H))
    # split off the power of x
    num, den = sp.fraction(H)
    xp = sp.Integer(1)
    for part, sgn in ((num, 1), (den, -1)):
        for f, m in sp.factor_list(part)[1]:
            if f == x:
                xp *= x ** (sgn * m)
    body = sp.factor(sp.simplify(H / xp))
    if body.has(x):
        raise ReductionError(f"reduced equation of {label} still depends on x: {body}")
    return ReducedODE(label, body, xp, res)


# -- solutions ---------------------------------------------------------------------

@dataclass
class VerificationReport:
    status: str  # "identically zero", "constraint variety", "nonzero"
    residual: GradedExpr
    constraints: list = field(default_factory=list)
    max_abs: float | None = None
    grid: dict | None = None
    parameters: dict | None = None

    @property
    def ok(self):
        return self.status in ("identically zero", "constraint variety")

    def to_dict(self):
        from .serialize import serialize
        out = {"status": self.status, "residual": serialize(self.residual)}
        if self.constraints:
            out["constraints"] = [
                {sp.sstr(k): sp.sstr(v) for k, v in c.items()} if isinstance(c, dict) else sp.sstr(c)
                for c in self.constraints
            ]
        if self.max_abs is not None:
            out["max_abs_residual"] = self.max_abs
        if self.grid is not None:
            out["grid"] = self.grid
        if self.parameters:
            out["parameters"] = {sp.sstr(k): v for k, v in self.parameters.items()}
        return out


def residual_of(Phi_value, form="component") -> GradedExpr:
    """Residual of the SUSY MS equation at ``Phi_value`` (not simplified).

    Non-polynomial coefficients are replaced by placeholder functions while
    the graded algebra runs, and substituted back at the end; expanding
    products of radicals term by term is what makes the direct route slow.
    """
    value = as_graded(Phi_value)
    holders, back, terms = {}, {}, {}
    for i, (key, c) in enumerate(value.items()):
        if c.is_polynomial(x, y):
            terms[key] = c
            continue
        F = sp.Function(f"_coef{i}")(x, y)
        terms[key] = F
        back[F] = c
    res = substitute_field(susy_ms_residual(form), GradedExpr(terms))
    if not back:
        return res
    out = {}
    for key, c in res.items():
        c = c.subs(back).doit()
        if c != 0:
            out[key] = c
    return GradedExpr(out, _canonical=True)


def _numeric_probe(c, trials=3, seed=7):
    """max |c| at a few random points (all free symbols sampled)."""
    rng = np.random.default_rng(seed)
    syms = sorted(c.free_symbols, key=str)
    worst = 0.0
    for _ in range(trials):
        vals = {s: sp.Rational(int(rng.integers(3, 17)), int(rng.integers(5, 11))) for s in syms}
        try:
            v = complex(sp.N(c.xreplace(vals), 30))
        except (TypeError, ValueError, ZeroDivisionError):
            return None
        if not np.isfinite(v):
            return None
        worst = max(worst, abs(v))
    return worst


def _simplify_coeff(c, signs=()):
    """Exact zero, or ``c`` unchanged when a numeric probe shows it is nonzero."""
    if c == 0:
        return c
    cases = [dict(zip(signs, vals)) for vals in _sign_cases(len(signs))]
    probes = [_numeric_probe(c.xreplace(case)) for case in cases]
    if any(p is not None and p > 1e-12 for p in probes):
        return c
    if all(_exact_zero(c.xreplace(case)) for case in cases):
        return sp.Integer(0)
    return c


def _sign_cases(n):
    import itertools
    return list(itertools.product((1, -1), repeat=n))


def _exact_zero(c):
    c = sp.simplify(c)
    if c == 0:
        return True
    return sp.simplify(sp.radsimp(sp.together(c))) == 0


def _constants(res: GradedExpr):
    syms = set()
    for c in res.terms.values():
        syms |= c.free_symbols
    return sorted(syms - {x, y}, key=str)


def _coefficient_equations(res: GradedExpr, consts):
    """Polynomial equations in the constants, or None when some residual
    coefficient is not polynomial in them."""
    eqs = []
    for c in res.terms.values():
        num = sp.numer(sp.together(c))
        try:
            poly = sp.Poly(sp.expand(num), x, y)
        except sp.PolynomialError:
            return None
        for e in poly.coeffs():
            if not e.is_polynomial(*consts):
                return None
            eqs.append(e)
    return [e for e in eqs if e != 0]


def sign_symbols(e):
    """Free symbols named eps, eps1, ... are taken to be +1 or -1."""
    e = as_graded(e)
    return tuple(s for s in sorted(e.free_symbols(), key=str) if s.name.startswith("eps"))


def verify_symbolic(Phi_value) -> VerificationReport:
    """Exact residual and, when it is not identically zero, its vanishing locus
    in the free constants.

    Sign constants (eps, eps1, ...) are checked for both values +1 and -1.
    A coefficient counts as zero only after exact simplification; random
    numeric probes are used to skip simplification of nonzero coefficients.
    """
    signs = sign_symbols(Phi_value)
    res = residual_of(Phi_value).map_coefficients(lambda c: _simplify_coeff(c, signs), expand=False)
    if not res:
        return VerificationReport("identically zero", res)
    consts = [c for c in _constants(res) if c not in signs]
    eqs = _coefficient_equations(res, consts) if consts else None
    if eqs:
        sols = [s for s in sp.solve(eqs, consts, dict=True) if s]
        sols = [s for s in sols if not res.map_coefficients(
            lambda c, s=s: _simplify_coeff(c.subs(s), signs), expand=False)]
        if sols:
            return VerificationReport("constraint variety", res, sols)
    return VerificationReport("nonzero", res)


DEFAULT_GRID = {"x": (0.5, 3.0, 41), "y": (-2.0, 2.0, 41)}


def parse_grid(spec: str | None) -> dict:
    """``"x=0.5:3:41,y=-2:2:41"`` -> grid dict."""
    if not spec:
        return dict(DEFAULT_GRID)
    out = dict(DEFAULT_GRID)
    for part in spec.split(","):
        name, rng = part.split("=")
        lo, hi, n = rng.split(":")
        out[name.strip()] = (float(lo), float(hi), int(n))
    return out


def _special(expr):
    return expr.has(sp.elliptic_f, sp.elliptic_e)


def _evaluate(expr, X, Y, complex_mode):
    if _special(expr):
        import mpmath
        fn = sp.lambdify((x, y), expr, modules="mpmath")
        # pointwise mpmath is slow; skip coordinates the expression ignores
        keys = [X if expr.has(x) else np.zeros_like(X), Y if expr.has(y) else np.zeros_like(Y)]
        memo = {}
        out = np.empty(X.shape, dtype=complex)
        for idx in np.ndindex(X.shape):
            key = (keys[0][idx], keys[1][idx])
            if key not in memo:
                memo[key] = complex(fn(mpmath.mpf(X[idx]), mpmath.mpf(Y[idx])))
            out[idx] = memo[key]
        return out
    fn = sp.lambdify((x, y), expr, modules="numpy")
    dtype = complex if complex_mode else float
    with np.errstate(all="ignore"):
        val = fn(X.astype(dtype), Y.astype(dtype))
    return np.broadcast_to(np.asarray(val, dtype=dtype), X.shape)


def verify_numeric(Phi_value, grid=None, parameters=None, seed=0) -> VerificationReport:
    """Evaluate every coefficient of the residual on a grid.

    Free constants not listed in ``parameters`` receive reproducible sample
    values.  Real evaluation is used unless ``I`` occurs; a NaN in real mode
    raises DomainError with the first offending point.
    """
    grid = grid or DEFAULT_GRID
    res = residual_of(Phi_value)
    consts = _constants(res)
    rng = np.random.default_rng(seed)
    params = dict(parameters or {})
    for c in consts:
        if c not in params and c.name not in params:
            params[c] = float(np.round(rng.uniform(0.5, 1.5), 6))
    sub = {(sp.Symbol(c) if isinstance(c, str) else c): v for c, v in params.items()}
    xs = np.linspace(*grid["x"])
    ys = np.linspace(*grid["y"])
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    worst = 0.0
    for c in res.terms.values():
        expr = c.subs(sub)
        complex_mode = expr.has(sp.I) or _special(expr)
        vals = _evaluate(expr, X, Y, complex_mode)
        bad = ~np.isfinite(vals)
        if bad.any():
            i = tuple(np.argwhere(bad)[0])
            raise DomainError("residual is undefined on the grid", (float(X[i]), float(Y[i])))
        worst = max(worst, float(np.max(np.abs(vals))))
    status = "identically zero" if worst == 0 else ("nonzero" if worst > 1e-8 else "identically zero")
    return VerificationReport(status, res, max_abs=worst,
                              grid={k: list(v) for k, v in grid.items()},
                              parameters={sp.Symbol(str(k)): v for k, v in params.items()})


def verify_susy_solution(Phi_value, mode="symbolic", **kw) -> VerificationReport:
    if mode == "symbolic":
        return verify_symbolic(Phi_value)
    if mode == "numeric":
        return verify_numeric(Phi_value, **kw)
    raise UsageError(f"unknown mode {mode!r}")


# -- the solutions printed for the worked cases --------------------------------------

def printed_solutions() -> dict:
    """Closed-form superfields of the worked reductions (as GradedExpr)."""
    t1, t2 = GradedExpr.atom(theta1), GradedExpr.atom(theta2)
    C1, C2, C7, C8, K, A, B = sp.symbols("C1 C2 C7 C8 K A B")
    C3, C4, C5, C6 = (odd_const(n) for n in ("C3", "C4", "C5", "C6"))
    eps1 = sp.Symbol("eps1")

    def translation(s1, s2):
        return (C1 + C2 * s2 + C3 * s1 + C4 * s2 * s1 + C5 * t2 + C6 * s2 * t2
                + C7 * s1 * t2 + C8 * s2 * s1 * t2)

    out = {
        "G1": translation(t1, y),
        "G4": translation(t1 - mu * x, y),
        "G15": (C1 + C2 * (y - k * x) + C3 * t1 + C4 * t1 * (y - k * x) + C5 * t2
                + C6 * t2 * (y - k * x) + C7 * t1 * t2 + C8 * t1 * t2 * (y - k * x)),
        "G66i": eps1 * sp.I * sp.sqrt(x ** 2 + y ** 2) * (t1 + mu) * t2,
        "G66ii": (A * y + B * x) * (t1 + mu) * t2,
        "G72i": eps1 * t1 * t2 * sp.sqrt(-(2 * y + eps) ** 2 / 8 - 2 * x ** 2 / 3
                                         + K * x ** 8 / (2 * y + eps) ** 6),
        "G72ii": t1 * t2 * (2 * A * y + B * x + eps * A),
    }
    c1, c2, C3b, C4b, a, C, M, N = sp.symbols("c1 c2 C3 C4 a C M N")
    out["G64a"] = c1 * x * t1 * t2 + c2 * y ** 2 + C3b * x * y + C4b * x ** 2
    out["G64b"] = a * y ** 2 + C * x * y - M * x ** 2 + N * t1 * t2
    out["G64c"] = t1 * t2 * g64c_profile()
    return out


def maple_F(z, kk):
    """Incomplete integral of the first kind with the sine-amplitude argument."""
    return sp.elliptic_f(sp.asin(z), kk ** 2)


def maple_E(z, kk):
    return sp.elliptic_e(sp.asin(z), kk ** 2)


def g64c_profile(F=maple_F, E=maple_E):
    """theta1*theta2-coefficient of the doubly periodic solution."""
    I = sp.I
    kk = 1 / sp.sqrt(2)
    z = sp.sqrt(-I * (x + I))
    common = z * sp.sqrt(2) * sp.sqrt(-I * (-x + I)) * sp.sqrt(x * I) * sp.sqrt(x * (x ** 2 + 1))
    bracket = (2 * common * E(z, kk) - common * F(z, kk)
               - sp.sqrt(x ** 3 + x) * x ** 2 - sp.sqrt(x ** 3 + x))
    return I * sp.sqrt(x) / (x ** 2 + 1) * bracket


def g72i_omega_identity():
    """Check that omega = sqrt(-xi^2/8 - 2/3 + K/xi^6) satisfies
    2*xi*omega*omega' + 6*omega^2 + xi^2 + 4 = 0.

    With S = omega^2 the relation reads xi*S' + 6*S + xi^2 + 4 = 0, a
    polynomial identity after multiplying by xi^6.
    """
    K = sp.Symbol("K")
    S = -xi ** 2 / 8 - sp.Rational(2, 3) + K / xi ** 6
    expr = sp.expand((xi * sp.diff(S, xi) + 6 * S + xi ** 2 + 4) * xi ** 6)
    return expr


def classical_profile_operator(f):
    """Minimal-surface operator applied to a function of (x, y).

    The residual of Phi = theta1*theta2*f(x, y) equals theta1*theta2 times
    this expression.
    """
    fx, fy = sp.diff(f, x), sp.diff(f, y)
    return ((1 + fy ** 2) * sp.diff(f, x, 2) - 2 * fx * fy * sp.diff(f, x, y)
            + (1 + fx ** 2) * sp.diff(f, y, 2))
