"""The classical minimal surface equation and its point symmetries.

    (1 + u_x^2) u_yy - 2 u_x u_y u_xy + (1 + u_y^2) u_xx = 0

Symbolic checks (conservation form, Euler-Lagrange, Wick rotation, second
prolongation), classification of one-dimensional subalgebras of the
seven-dimensional symmetry algebra, Abel-equation reductions, and numeric
verification of the closed-form invariant solutions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np
import sympy as sp
from scipy.linalg import expm

from .errors import DomainError, NoMatch, UsageError
from .superalgebra import CLASSICAL_ORDER, classical_algebra, classical_generators

x, y, t, s = sp.symbols("x y t s")
xi, m, s0, k0 = sp.symbols("xi m s0 k0")
U = sp.Function("u")

# jet symbols for first and second derivatives
ux, uy, uxx, uxy, uyy = sp.symbols("u_x u_y u_xx u_xy u_yy")


def ms_operator(ux, uy, uxx, uxy, uyy):
    return (1 + ux ** 2) * uyy - 2 * ux * uy * uxy + (1 + uy ** 2) * uxx


MS = ms_operator(ux, uy, uxx, uxy, uyy)


def ms_residual(expr, X=x, Y=y):
    """Residual of an explicit expression u(X, Y)."""
    d = lambda *v: sp.diff(expr, *v)
    return ms_operator(d(X), d(Y), d(X, X), d(X, Y), d(Y, Y))


def ms_residual_fd(fn, X, Y, h=1e-3):
    """Second-order central differences of a callable u(x, y).

    Returns (residual, scale) where scale is the largest magnitude among the
    three terms of the operator, so residual/scale is the relative residual.
    """
    f = lambda a, b: fn(a, b)
    u0 = f(X, Y)
    ux_ = (f(X + h, Y) - f(X - h, Y)) / (2 * h)
    uy_ = (f(X, Y + h) - f(X, Y - h)) / (2 * h)
    uxx_ = (f(X + h, Y) - 2 * u0 + f(X - h, Y)) / h ** 2
    uyy_ = (f(X, Y + h) - 2 * u0 + f(X, Y - h)) / h ** 2
    uxy_ = (f(X + h, Y + h) - f(X + h, Y - h) - f(X - h, Y + h) + f(X - h, Y - h)) / (4 * h * h)
    terms = [(1 + ux_ ** 2) * uyy_, -2 * ux_ * uy_ * uxy_, (1 + uy_ ** 2) * uxx_]
    scale = np.maximum.reduce([np.abs(a) for a in terms])
    return sum(terms), scale


# -- conservation law, Lagrangian, Wick rotation ------------------------------------

def _jets_to_symbols(e):
    u = U(x, y)
    return e.subs({u.diff(x, 2): uxx, u.diff(y, 2): uyy, u.diff(x, y): uxy,
                   u.diff(x): ux, u.diff(y): uy})


def conservation_form():
    u = U(x, y)
    W = sp.sqrt(1 + u.diff(x) ** 2 + u.diff(y) ** 2)
    return sp.diff(u.diff(x) / W, x) + sp.diff(u.diff(y) / W, y)


def conservation_ratio():
    """(divergence form) * (1 + u_x^2 + u_y^2)^(3/2) / (MS operator); expected 1."""
    div = _jets_to_symbols(conservation_form())
    return sp.simplify(div * (1 + ux ** 2 + uy ** 2) ** sp.Rational(3, 2) / MS)


def lagrangian():
    u = U(x, y)
    return sp.sqrt(1 + u.diff(x) ** 2 + u.diff(y) ** 2)


def wick_rotate(expr, old=None, new=None):
    """Substitute y = i t in a jet polynomial: d/dy = -i d/dt."""
    a, b, aa, ab, bb = old or (ux, uy, uxx, uxy, uyy)
    na, nb, naa, nab, nbb = new or sp.symbols("u_x u_t u_xx u_xt u_tt")
    return sp.expand(expr.subs({b: -sp.I * nb, bb: -nbb, ab: -sp.I * nab, a: na, aa: naa},
                               simultaneous=True))


def born_infeld():
    ux_, ut, uxx_, uxt, utt = sp.symbols("u_x u_t u_xx u_xt u_tt")
    return (1 + ux_ ** 2) * utt - 2 * ux_ * ut * uxt - (1 - ut ** 2) * uxx_


@dataclass
class EulerLagrangeReport:
    el_minus_divergence: sp.Expr
    wick_plus_born_infeld: sp.Expr
    wick_twice_minus_ms: sp.Expr

    @property
    def ok(self):
        return all(e == 0 for e in (self.el_minus_divergence, self.wick_plus_born_infeld,
                                     self.wick_twice_minus_ms))


def euler_lagrange_check() -> EulerLagrangeReport:
    """Euler-Lagrange equation of the area density against the divergence form,
    and the Wick rotation y = i t against the scalar Born-Infeld equation."""
    u = U(x, y)
    (eq,) = sp.euler_equations(lagrangian(), u, [x, y])
    # euler_equations gives dL/du - D_x(dL/du_x) - D_y(dL/du_y) = 0
    el = sp.simplify(_jets_to_symbols(eq.lhs + conservation_form()))
    wick = sp.simplify(wick_rotate(MS) + born_infeld())
    ts = sp.symbols("u_x u_t u_xx u_xt u_tt")
    back = wick_rotate(wick_rotate(MS), ts, (ux, uy, uxx, uxy, uyy))
    return EulerLagrangeReport(el, wick, sp.expand(back - MS))


# -- second prolongation ------------------------------------------------------------

def prolong2_symmetry_check(field_coeffs, on_shell=True):
    """Second prolongation of ``xi d_x + tau d_y + phi d_u`` applied to the MS
    operator, reduced modulo the equation (u_xx eliminated).

    ``field_coeffs`` maps "x", "y", "u" to expressions in symbols x, y, u, or is
    a classical SuperVectorField.
    """
    usym = sp.Symbol("u")
    if hasattr(field_coeffs, "coefficient"):
        field_coeffs = {c: field_coeffs.coefficient(c).body() for c in ("x", "y", "u")}
    u = U(x, y)
    co = {key: sp.sympify(field_coeffs.get(key, 0)).subs(usym, u) for key in ("x", "y", "u")}
    Q = co["u"] - co["x"] * u.diff(x) - co["y"] * u.diff(y)

    def phi(*J):
        vs = [x if j == "x" else y for j in J]
        return sp.diff(Q, *vs) + co["x"] * sp.diff(u, *vs, x) + co["y"] * sp.diff(u, *vs, y)

    pr = (phi("x") * sp.diff(MS, ux) + phi("y") * sp.diff(MS, uy) + phi("x", "x") * sp.diff(MS, uxx)
          + phi("x", "y") * sp.diff(MS, uxy) + phi("y", "y") * sp.diff(MS, uyy))
    pr = sp.expand(pr)
    # third derivatives cancel identically for point symmetries
    pr = _jets_to_symbols(pr.subs({u.diff(x, y, 2): sp.Symbol("u_xyy"), u.diff(x, 2, y): sp.Symbol("u_xxy"),
                                   u.diff(x, 3): sp.Symbol("u_xxx"), u.diff(y, 3): sp.Symbol("u_yyy")}))
    pr = sp.expand(pr.subs(u, usym))
    if on_shell:
        sol = sp.solve(MS, uxx)[0]
        pr = pr.subs(uxx, sol)
    return sp.factor(sp.simplify(pr))


def symmetry_report():
    """On-shell residual for each generator of the classical algebra plus a
    negative control ``x d_u``."""
    out = {n: prolong2_symmetry_check(v) for n, v in classical_generators().items()}
    out["x*d_u (control)"] = prolong2_symmetry_check({"u": x})
    return out


# -- classification -----------------------------------------------------------------

LISTED_CLASSES = ("e1", "e4", "e4 + m*e3", "e7")
EXTRA_CLASS = "e7 + a*e4"

_ROT = (3, 4, 5)    # e4, e5, e6
_TRANS = (0, 1, 2)  # e1, e2, e3


def structure_constants() -> np.ndarray:
    """c[i, j, k] with [e_i, e_j] = sum_k c[i, j, k] e_k."""
    alg = classical_algebra()
    n = len(CLASSICAL_ORDER)
    c = np.zeros((n, n, n))
    for i, a in enumerate(CLASSICAL_ORDER):
        for j, b in enumerate(CLASSICAL_ORDER):
            for name, val in alg.table.entries[(a, b)].items():
                c[i, j, CLASSICAL_ORDER.index(name)] = float(val)
    return c


def ad_matrix(Y) -> np.ndarray:
    """Matrix of ad_Y acting on coefficient vectors."""
    c = structure_constants()
    return np.einsum("i,ijk->kj", np.asarray(Y, dtype=float), c)


def Ad(Y, X) -> np.ndarray:
    """Ad_exp(Y) X = exp(ad_Y) X."""
    return expm(ad_matrix(Y)) @ np.asarray(X, dtype=float)


def _align(vec, block, target):
    """Rotation generator Y in span{e4, e5, e6} with Ad_exp(Y) carrying the
    ``block`` part of ``vec`` onto the line of basis vector ``target``."""
    v = np.array([vec[i] for i in block], dtype=float)
    norm = np.linalg.norm(v)
    goal = np.zeros(3)
    goal[block.index(target)] = 1.0
    vhat = v / norm
    axis = np.cross(vhat, goal)
    sin, cos = np.linalg.norm(axis), float(vhat @ goal)
    if sin < 1e-15:
        return np.zeros(7)
    angle = np.arctan2(sin, cos)
    K = angle * np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]]) / sin
    # express K as a combination of ad_{e4}, ad_{e5}, ad_{e6} restricted to the block
    basis = []
    for r in _ROT:
        e = np.zeros(7)
        e[r] = 1.0
        basis.append(ad_matrix(e)[np.ix_(block, block)].ravel())
    coef, *_ = np.linalg.lstsq(np.array(basis).T, K.ravel(), rcond=None)
    Y = np.zeros(7)
    Y[list(_ROT)] = coef
    return Y


@dataclass
class ClassicalNormalization:
    label: str
    parameter: float
    steps: list = field(default_factory=list)  # ("adjoint", Y) and ("scale", f)
    result: np.ndarray = None


def classical_normalize(X, tol=1e-12) -> ClassicalNormalization:
    """Carry a nonzero element of the seven-dimensional algebra to one of
    {e1}, {e4 + m e3}, {e7 + a e4} by rotations, translations and scaling."""
    X = np.asarray(X, dtype=float)
    if np.linalg.norm(X) < tol:
        raise NoMatch("zero element")
    steps = []

    def act(Y, X):
        steps.append(("adjoint", Y))
        return Ad(Y, X)

    rot = X[list(_ROT)]
    if abs(X[6]) > tol or np.linalg.norm(rot) > tol:
        if np.linalg.norm(rot) > tol:
            X = act(_align(X, _ROT, 3), X)
        if abs(X[6]) > tol:
            # ad_{e7} is invertible on the translations: remove them all
            Y = np.zeros(7)
            # [Y, X] = -ad_X Y, so Y solves ad_X Y = X on the translation block
            Y[list(_TRANS)] = np.linalg.solve(ad_matrix(X)[np.ix_(_TRANS, _TRANS)], X[list(_TRANS)])
            X = act(Y, X)
            f = 1 / X[6]
            steps.append(("scale", f))
            X = X * f
            label = "e7" if abs(X[3]) < tol else EXTRA_CLASS
            return ClassicalNormalization(label, X[3], steps, X)
        # c e4 + translations: ad_{e4} removes the e1, e2 components
        Y = np.zeros(7)
        sub = ad_matrix(X)[np.ix_((0, 1), (0, 1))]
        Y[[0, 1]] = np.linalg.solve(sub, X[[0, 1]])
        X = act(Y, X)
        f = 1 / X[3]
        steps.append(("scale", f))
        X = X * f
        label = "e4" if abs(X[2]) < tol else "e4 + m*e3"
        return ClassicalNormalization(label, X[2], steps, X)
    X = act(_align(X, _TRANS, 0), X)
    f = 1 / X[0]
    steps.append(("scale", f))
    return ClassicalNormalization("e1", 0.0, steps, X * f)


def apply_classical_steps(steps, X):
    X = np.asarray(X, dtype=float)
    for kind, val in steps:
        X = Ad(val, X) if kind == "adjoint" else X * val
    return X


def classical_classify(include_extra=False):
    """Representatives of the one-dimensional subalgebras.

    The standard list has four entries; ``include_extra`` adds the family
    {e7 + a e4}, which the normalizer reaches whenever both the dilation and
    a rotation are present.
    """
    reps = list(LISTED_CLASSES)
    if include_extra:
        reps.append(EXTRA_CLASS)
    return reps


def su2_killing_form():
    return classical_algebra().killing_form(["e4", "e5", "e6"])


# -- Abel reductions ----------------------------------------------------------------

v, vp = sp.symbols("v v_xi")


def _reduce(u_expr):
    F = sp.Function("F")
    r = ms_residual(u_expr(F(x ** 2 + y ** 2))).doit()
    rep = {}
    for sub in r.atoms(sp.Subs):
        rep[sub] = {1: v, 2: vp}[sub.expr.derivative_count]
    xp, yp = sp.symbols("xi y", positive=True)
    r = sp.simplify(r.xreplace(rep).subs(y, yp).subs(x, sp.sqrt(xp - yp ** 2)))
    (sol,) = sp.solve(r, vp)
    return sp.factor(sol.subs(xp, xi))


ABEL_E4 = -v / xi - 2 * v ** 3
ABEL_E4_M = -2 * xi / (xi + m ** 2) * v ** 3 - (2 * xi + 3 * m ** 2) / (2 * xi * (xi + m ** 2)) * v


@dataclass
class ClassicalReduction:
    label: str
    rhs: sp.Expr
    expected: sp.Expr

    @property
    def matches(self):
        return sp.simplify(self.rhs - self.expected) == 0

    @property
    def text(self):
        return f"v' = {sp.sstr(self.rhs)}"


def reduce_classical(label) -> ClassicalReduction:
    """Reduced ODE v_xi = rhs(v, xi), v the xi-derivative of the invariant unknown."""
    label = label.replace(" ", "")
    if label == "e4":
        return ClassicalReduction("e4", _reduce(lambda F: F), ABEL_E4)
    if label in ("e4+me3", "e4+m*e3"):
        rhs = _reduce(lambda F: F - m * sp.asin(x / sp.sqrt(x ** 2 + y ** 2)))
        return ClassicalReduction("e4+me3", rhs, ABEL_E4_M)
    raise UsageError(f"no reduction stored for {label!r}")


# -- closed-form solutions ------------------------------------------------------------

def radial_profile(S0=1, K0=0):
    """u as a function of xi = x^2 + y^2 for the {e4} invariant solution."""
    return (sp.log(sp.Abs(4 * sp.sqrt(S0) * sp.sqrt(S0 * xi ** 2 - 2 * xi) + 4 * S0 * xi - 4))
            / sp.sqrt(2 * S0) + K0)


def radial_solution(S0=1, K0=0):
    return radial_profile(S0, K0).subs(xi, x ** 2 + y ** 2)


def helicoidal_profile(S0, M, K0=0, absolute=True):
    """phi(xi) for the {e4 + m e3} solution.

    With ``absolute`` the first logarithm carries |.| as printed; otherwise the
    principal complex logarithm is used.
    """
    R = sp.sqrt(S0 * xi - 2) * sp.sqrt(M ** 2 + xi)
    A = (2 * sp.sqrt(2) * sp.I * M * R + (S0 * M ** 2 - 2) * xi - 4 * M ** 2) / xi
    if absolute:
        a, b = sp.re(A), sp.im(A)
        first = sp.I * M / 2 * sp.log(sp.sqrt(a ** 2 + b ** 2))
    else:
        first = sp.I * M / 2 * sp.log(A)
    B = (2 * sp.sqrt(S0) * R + (2 * xi + M ** 2) * S0 - 2) / sp.sqrt(S0)
    return first + sp.log(sp.Abs(B)) / sp.sqrt(2 * S0) + K0


def _annulus(S0, n=25):
    """Polar grid on 3/s0 <= x^2 + y^2 <= 10/s0, inside the real branch."""
    r = np.linspace(np.sqrt(3 / S0), np.sqrt(10 / S0), n)
    a = np.linspace(0.1, 2 * np.pi - 0.1, n)
    R, A = np.meshgrid(r, a)
    return R * np.cos(A), R * np.sin(A)


@dataclass
class NumericReport:
    name: str
    max_residual: float
    tolerance: float
    extra: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.max_residual <= self.tolerance

    def to_dict(self):
        return {"name": self.name, "max_residual": self.max_residual, "tolerance": self.tolerance,
                "ok": self.ok, **self.extra}


def verify_radial_fd(S0=1.0, K0=0.0, h=1e-3, n=25, richardson=True) -> NumericReport:
    """Relative finite-difference residual of the {e4} solution on the annulus.

    The plain second-order stencil at step h leaves an O(h^2) truncation error
    of a few 1e-6 near the inner rim; with ``richardson`` the steps h and h/2
    are combined into a fourth-order estimate.  Both values are reported.
    """
    X, Y = _annulus(S0, n)
    q = X ** 2 + Y ** 2
    if np.any(S0 * q ** 2 - 2 * q <= 0):
        raise DomainError("grid leaves the real branch", None)
    fn = sp.lambdify((x, y), radial_solution(S0, K0), "numpy")
    res, scale = ms_residual_fd(fn, X, Y, h)
    plain = float((np.abs(res) / scale).max())
    if richardson:
        res2, _ = ms_residual_fd(fn, X, Y, h / 2)
        res = (4 * res2 - res) / 3
    rel = float((np.abs(res) / scale).max())
    return NumericReport(f"radial s0={S0} k0={K0}", rel, 1e-6,
                         {"h": h, "richardson": richardson, "second_order_residual": plain})


def _abel_residual(profile, rhs, points, part=None, dps=30):
    """max |phi'' - rhs(xi, phi')| over the points, derivatives by mpmath.diff.

    ``part`` selects the real ("re") or imaginary ("im") part of phi first.
    """
    f0 = sp.lambdify(xi, profile, "mpmath")
    f = {None: f0, "re": lambda z: mpmath.re(f0(z)), "im": lambda z: mpmath.im(f0(z))}[part]
    g = sp.lambdify((xi, v), rhs, "mpmath")
    worst = 0
    with mpmath.workdps(dps):
        for p in points:
            p = mpmath.mpf(p)
            worst = max(worst, abs(mpmath.diff(f, p, 2) - g(p, mpmath.diff(f, p))))
    return float(worst)


def verify_radial_abel(S0=1.0, K0=0, n=25) -> NumericReport:
    """Residual of the {e4} Abel equation for v = d/dxi of the closed form,
    on xi in [3/s0, 10/s0]; derivatives by high-precision numeric differentiation."""
    pts = np.linspace(3 / S0, 10 / S0, n)
    prof = radial_profile(sp.nsimplify(S0), K0)
    return NumericReport(f"abel e4 s0={S0}", _abel_residual(prof, ABEL_E4, pts), 1e-8)


def verify_helicoidal_abel(S0=1.0, M=0.7, absolute=True, n=25) -> NumericReport:
    """Residual of the {e4 + m e3} Abel equation on xi in [3/s0, 10/s0].

    With ``absolute`` (the printed form) the real part of phi is tested and the
    residual of the imaginary part is reported separately; otherwise the
    principal-branch complex profile is tested as a whole.
    """
    pts = np.linspace(3 / S0, 10 / S0, n)
    prof = helicoidal_profile(sp.nsimplify(S0), sp.nsimplify(M), 0, absolute)
    rhs = ABEL_E4_M.subs(m, sp.nsimplify(M))
    if absolute:
        re = _abel_residual(prof, rhs, pts, "re")
        im = _abel_residual(prof, rhs, pts, "im")
        return NumericReport(f"abel e4+me3 s0={S0} m={M} printed", re, 1e-8, {"imaginary_part_residual": im})
    return NumericReport(f"abel e4+me3 s0={S0} m={M} principal branch",
                         _abel_residual(prof, rhs, pts), 1e-8)
