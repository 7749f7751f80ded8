"""One-dimensional subalgebras of the SUSY MS symmetry superalgebra.

The representative lists are rebuilt from the structure constants:

* orbit analysis of a single block {P1, P3, Q1} under its own group shows
  that only the P1 coefficient moves, and only by a nilpotent amount, so the
  classes are labelled by which generators occur;
* Goursat combination of two blocks gives the untwisted classes of each block
  followed by the twisted sums ``A + tau(A)``;
* adjoining D gives the splitting classes plus ``D + (class)``;
* the reflection x<->y, theta1<->theta2 identifies classes pairwise.

Coefficients follow a fixed naming rule: generators are written in the order
D, P1, P2, P5, P3, P4, Q1, Q2; the first even generator after D carries 1
(or eps when D is present), further even ones k and ell; odd generators carry
mu, nu, rho, sigma in order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

import sympy as sp

from .errors import ConsistencyError, NoMatch, UsageError
from .grassmann import GradedExpr, as_graded, gfunc, ginverse, gmul, odd_const, parity_of
from .superalgebra import Element, susy_algebra

DISPLAY_ORDER = ("D", "P1", "P2", "P5", "P3", "P4", "Q1", "Q2")
EVEN_GENERATORS = ("D", "P1", "P2", "P5")
ODD_GENERATORS = ("P3", "P4", "Q1", "Q2")
REFLECTION = {"D": "D", "P1": "P2", "P2": "P1", "P3": "P4", "P4": "P3",
              "Q1": "Q2", "Q2": "Q1", "P5": "P5"}

S1 = ("P1", "P3", "Q1")
S2 = ("P2", "P4", "Q2")

eps, k, ell = sp.symbols("eps k ell")
ODD_NAMES = ("mu", "nu", "rho", "sigma")

# labels flagged as having non-standard invariants
NONSTANDARD_LABELS = ("L2", "L3", "L6", "L15", "L16", "L19", "L21", "L24", "L33")

STAGES = ("s1", "s2", "s", "tilde-s", "full", "deduped")


def _order(support):
    return tuple(sorted(support, key=DISPLAY_ORDER.index))


def parameter_names(support):
    """Formal parameter attached to each generator of a class."""
    support = _order(support)
    evens = ["eps", "k", "ell"] if "D" in support else [None, "k", "ell"]
    odds = list(ODD_NAMES)
    out = {}
    for g in support:
        if g == "D":
            out[g] = None
        elif g in EVEN_GENERATORS:
            out[g] = evens.pop(0)
        else:
            out[g] = odds.pop(0)
    return out


def family_element(support, values=None) -> Element:
    """The representative of ``support`` with parameters set from ``values``.

    Missing values stay formal (symbols k, ell, eps; odd constants mu, ...).
    """
    values = values or {}
    coeffs = {}
    for g, p in parameter_names(support).items():
        if p is None:
            coeffs[g] = 1
        elif p in values:
            coeffs[g] = as_graded(values[p])
        elif g in ODD_GENERATORS:
            coeffs[g] = odd_const(p)
        else:
            coeffs[g] = sp.Symbol(p)
    return susy_algebra().element(coeffs)


def family_string(support) -> str:
    parts = []
    for g, p in parameter_names(support).items():
        parts.append(g if p is None else f"{p}*{g}")
    return " + ".join(parts)


@dataclass(frozen=True)
class RepresentativeClass:
    label: str
    support: tuple
    stage: str
    g_index: int
    standard: bool = True

    @property
    def element(self) -> Element:
        return family_element(self.support)

    def __str__(self):
        return f"{self.label} = {{{family_string(self.support)}}}"

    def to_dict(self):
        return {
            "label": self.label,
            "G": f"G{self.g_index}",
            "element": family_string(self.support),
            "stage": self.stage,
            "standard": self.standard,
        }


def is_standard(support) -> bool:
    """Classes without any even generator have non-standard invariants."""
    return any(g in EVEN_GENERATORS for g in support)


# -- orbit analysis of a block ------------------------------------------------------

def block_orbit_shift(block=S1):
    """Ad_exp(Y) X - X for general X, Y in ``block``.

    Even coefficients are alpha, r; odd ones mu, nu (for X) and eta, lambda
    (for Y).  Returns the difference as an Element.
    """
    alg = susy_algebra()
    even_gens = [g for g in block if not alg.parities[g]]
    odd_gens = [g for g in block if alg.parities[g]]
    xs = {even_gens[0]: sp.Symbol("alpha")}
    ys = {even_gens[0]: sp.Symbol("r")}
    for g, a, b in zip(odd_gens, ("mu", "nu"), ("eta", "lambda")):
        xs[g] = odd_const(a)
        ys[g] = odd_const(b)
    X, Y = alg.element(xs), alg.element(ys)
    return alg.adjoint_action(Y, X) - X


def invariant_generators(block=S1):
    """Generators whose coefficient is unchanged by the block's own group,
    and those shifted only by nilpotent amounts."""
    shift = block_orbit_shift(block)
    moved = {}
    for g, c in shift.coeffs.items():
        moved[g] = "nilpotent" if c.body() == 0 else "invertible"
    fixed = [g for g in block if g not in moved]
    return fixed, moved


def classify_block(block) -> list:
    """Classes of one block: non-empty generator subsets ordered by size.

    The orbit analysis must show that every coefficient either stays fixed
    or moves by a nilpotent amount; otherwise the subset enumeration would be
    too fine and we refuse.
    """
    fixed, moved = invariant_generators(block)
    if any(v != "nilpotent" for v in moved.values()):
        raise ConsistencyError(f"block {block} has invertible orbit shifts: {moved}")
    out = []
    for size in range(1, len(block) + 1):
        for combo in itertools.combinations(block, size):
            out.append(_order(combo))
    return out


def classify_stage_S1():
    return _stage("s1")


def goursat_combine(classes_a, classes_b):
    """Untwisted classes of both summands, then the twisted sums A + tau(A).

    Every nonzero one-dimensional class of one summand is homomorphic to
    every class of the other, so all pairs twist.
    """
    untwisted = list(classes_a) + list(classes_b)
    twisted = [_order(a + b) for a in classes_a for b in classes_b]
    return untwisted, twisted


def splitting_nonsplitting_with_D(classes):
    splitting = list(classes) + [("D",)]
    nonsplitting = [_order(("D",) + c) for c in classes]
    return splitting, nonsplitting


def reflect_support(support):
    return _order(REFLECTION[g] for g in support)


def reflect_element(e: Element) -> Element:
    return susy_algebra().element({REFLECTION[g]: c for g, c in e.coeffs.items()})


def reflect_and_dedupe(supports):
    """Keep the first member of every reflection pair (in list order)."""
    index = {frozenset(s): i for i, s in enumerate(supports)}
    kept, pairing = [], {}
    seen = set()
    for i, s in enumerate(supports):
        img = frozenset(reflect_support(s))
        if img not in index:
            raise ConsistencyError(f"reflection image of {s} is not in the list")
        j = index[img]
        pairing[i + 1] = j + 1
        if frozenset(s) in seen or img in seen:
            continue
        seen.add(frozenset(s))
        kept.append(i)
    return kept, pairing


@lru_cache(maxsize=None)
def _g_supports():
    s1 = classify_block(S1)
    s2 = classify_block(S2)
    untw, tw = goursat_combine(s1, s2)
    s = untw + tw
    untw5, tw5 = goursat_combine(s, [("P5",)])
    tilde = untw5 + tw5
    split, nonsplit = splitting_nonsplitting_with_D(tilde)
    return tuple(split + nonsplit)


_STAGE_RANGE = {"s1": (1, 7), "s2": (8, 14), "s": (1, 63), "tilde-s": (1, 127), "full": (1, 255)}
_STAGE_GENS = {
    "s1": set(S1), "s2": set(S2), "s": set(S1 + S2),
    "tilde-s": set(S1 + S2 + ("P5",)), "full": set(DISPLAY_ORDER), "deduped": set(DISPLAY_ORDER),
}


@lru_cache(maxsize=None)
def _stage(stage):
    sup = _g_supports()
    if stage == "deduped":
        kept, _ = reflect_and_dedupe(list(sup))
        return tuple(
            RepresentativeClass(f"L{n + 1}", sup[i], "deduped", i + 1, is_standard(sup[i]))
            for n, i in enumerate(kept)
        )
    if stage not in _STAGE_RANGE:
        raise UsageError(f"unknown stage {stage!r}; expected one of {STAGES}")
    lo, hi = _STAGE_RANGE[stage]
    return tuple(
        RepresentativeClass(f"G{i}", sup[i - 1], stage, i, is_standard(sup[i - 1]))
        for i in range(lo, hi + 1)
    )


def classify(stage="full", dedupe_reflection=False) -> list:
    """Representative classes of a stage (``deduped`` is full + reflection)."""
    if dedupe_reflection:
        if stage != "full":
            raise UsageError("reflection deduplication applies to the full stage only")
        stage = "deduped"
    return list(_stage(stage))


def representative(label: str) -> RepresentativeClass:
    label = label.strip()
    if label.startswith("L"):
        pool = _stage("deduped")
        n = int(label[1:])
        if not 1 <= n <= len(pool):
            raise UsageError(f"no class {label}")
        return pool[n - 1]
    if label.startswith("G"):
        n = int(label[1:])
        if not 1 <= n <= 255:
            raise UsageError(f"no class {label}")
        return _stage("full")[n - 1]
    raise UsageError(f"labels start with G or L, got {label!r}")


def g_to_l() -> dict:
    """G-index -> L-label, through the reflection pairing where needed."""
    sup = _g_supports()
    kept, pairing = reflect_and_dedupe(list(sup))
    pos = {i + 1: f"L{n + 1}" for n, i in enumerate(kept)}
    return {g: pos.get(g, pos.get(pairing[g])) for g in range(1, len(sup) + 1)}


def export_json(stage="full", dedupe_reflection=False) -> str:
    items = [c.to_dict() for c in classify(stage, dedupe_reflection)]
    return json.dumps({"schema": 1, "stage": "deduped" if dedupe_reflection else stage,
                       "count": len(items), "classes": items}, indent=1)


# -- conjugators ------------------------------------------------------------------

def weights():
    """Eigenvalues of ad(D) on the basis."""
    return susy_algebra().diagonal_weights("D")


def _graded_power(s, n):
    s = as_graded(s)
    if n >= 0:
        return s ** n
    return ginverse(s) ** (-n)


def apply_step(e: Element, step) -> Element:
    alg = susy_algebra()
    kind = step[0]
    if kind == "scale":
        return e.scale(step[1])
    if kind == "dilate":
        # Ad_exp(tD) with s = exp(t): a generator of ad(D)-weight w picks up s^w
        s = step[1]
        w = weights()
        return alg.element({g: gmul(_graded_power(s, int(w[g])), c) for g, c in e.coeffs.items()})
    if kind == "adjoint":
        return alg.adjoint_action(step[1], e)
    if kind == "reflect":
        return reflect_element(e)
    raise UsageError(f"unknown conjugation step {kind!r}")


def apply_conjugator(e: Element, steps) -> Element:
    for st in steps:
        e = apply_step(e, st)
    return e


@dataclass
class Normalization:
    label: str
    steps: list
    values: dict
    representative: Element


def _odd_monomials(atoms, max_degree=None):
    atoms = sorted(atoms, key=lambda a: a.sort_key)
    top = len(atoms) if max_degree is None else min(max_degree, len(atoms))
    out = []
    for d in range(1, top + 1, 2):
        for combo in itertools.combinations(atoms, d):
            out.append(GradedExpr({combo: 1}))
    return out


def _cancel_even_souls(e: Element, targets):
    """Find Y in the odd span {P3, P4, Q1, Q2} (with odd coefficients built
    from the atoms of ``e``) so that Ad_exp(Y) e has no soul on the even
    coefficients listed in ``targets``.  Returns Y or None.
    """
    alg = susy_algebra()
    atoms = set()
    for c in e.coeffs.values():
        atoms |= set(c.odd_atoms())
    goal = {g: e.coefficient(g).soul() for g in targets}
    if not any(goal.values()) or not atoms:
        return alg.element() if not any(goal.values()) else None
    monos = _odd_monomials(atoms)
    unknowns, ycoeffs = [], {}
    for g in ODD_GENERATORS:
        if g not in _STAGE_GENS["tilde-s"]:
            continue
        acc = GradedExpr.zero()
        for i, m in enumerate(monos):
            a = sp.Symbol(f"_a_{g}_{i}")
            unknowns.append(a)
            acc = acc + a * m
        ycoeffs[g] = acc
    Y = alg.element(ycoeffs)
    # brackets of S~ land in P1, P2 and are central there: one term suffices
    shift = alg.bracket(Y, e)
    eqs = []
    for g in targets:
        diff = shift.coefficient(g) + goal[g]
        eqs.extend(diff.terms.values())
    if not eqs:
        return alg.element()
    sol = sp.linsolve(eqs, unknowns)
    if not sol:
        return None
    (vals,) = sol
    sub = {a: v.subs({b: 0 for b in unknowns}) for a, v in zip(unknowns, vals)}
    return Y.map_coefficients(lambda c: c.subs(sub))


def _real_sign(b):
    b = sp.nsimplify(b) if b.is_number else b
    if b.is_number and b.is_real and b != 0:
        return 1 if b > 0 else -1
    return None


def _normal_support(e: Element):
    return _order(g for g in e.coeffs)


def _normalize_g(e: Element, stage_gens):
    """Normal form inside the G-list.  Returns (support, steps, element)."""
    alg = susy_algebra()
    if e.is_zero():
        raise NoMatch("the zero element spans no subalgebra")
    if e.parity() != "even":
        raise NoMatch(f"element {e} is not even")
    extra = set(e.coeffs) - stage_gens
    if extra:
        raise NoMatch(f"generators {sorted(extra)} are outside the stage")
    steps = []
    d = e.coefficient("D")
    if d:
        if d.body() == 0:
            raise NoMatch("nilpotent D coefficient")
        if d != GradedExpr.scalar(1):
            st = ("scale", ginverse(d))
            steps.append(st)
            e = apply_step(e, st)
        evens = [g for g in ("P1", "P2", "P5") if g in e.coeffs]
        for g in evens:
            if e.coefficient(g).body() == 0:
                raise NoMatch(f"nilpotent {g} coefficient next to D")
        if evens:
            g0 = evens[0]
            c0 = e.coefficient(g0)
            sign = _real_sign(c0.body())
            if sign is None:
                raise NoMatch(f"sign of the {g0} coefficient is undetermined")
            w = -int(weights()[g0])
            target = c0 / sign
            if target != GradedExpr.scalar(1):
                s = gfunc(lambda z: z ** sp.Rational(1, w), target)
                st = ("dilate", s)
                steps.append(st)
                e = apply_step(e, st)
        return _normal_support(e), steps, e

    # translation part: remove nilpotent pieces of the P1, P2 coefficients
    souls = [g for g in ("P1", "P2") if g in e.coeffs and e.coefficient(g).soul()]
    if souls:
        Y = _cancel_even_souls(e, souls)
        if Y is not None and not Y.is_zero():
            st = ("adjoint", Y)
            steps.append(st)
            e = apply_step(e, st)
    for g in ("P1", "P2", "P5"):
        c = e.coefficient(g)
        if c and c.body() == 0:
            raise NoMatch(f"nilpotent {g} coefficient cannot be normalized")
    evens = [g for g in ("P1", "P2", "P5") if g in e.coeffs]
    if evens:
        c0 = e.coefficient(evens[0])
        if c0 != GradedExpr.scalar(1):
            st = ("scale", ginverse(c0))
            steps.append(st)
            e = apply_step(e, st)
    return _normal_support(e), steps, e


def _values(support, e: Element):
    names = parameter_names(support)
    out = {}
    for g, p in names.items():
        if p is not None:
            c = e.coefficient(g)
            out[p] = c.body() if not c.odd_atoms() else c
    return out


def normalize_to_representative(x: Element, stage="deduped") -> Normalization:
    """Label of the class of ``x`` and the conjugation steps reaching it.

    ``apply_conjugator(x, result.steps) == result.representative`` holds
    exactly, and the representative is the family element of the label
    evaluated at ``result.values``.

    The group used is the one the representative lists are built with: the
    adjoint action of the translation part, dilations, rescaling of the
    spanning vector and (for ``deduped``) the reflection.  Elements outside
    this procedure raise NoMatch.
    """
    if stage not in STAGES:
        raise UsageError(f"unknown stage {stage!r}")
    gens = _STAGE_GENS[stage]
    support, steps, e = _normalize_g(x, gens)
    pool = _stage(stage)
    lookup = {frozenset(c.support): c for c in pool}
    cls = lookup.get(frozenset(support))
    if cls is None and stage == "deduped":
        refl = reflect_element(x)
        support, steps2, e = _normalize_g(refl, gens)
        steps = [("reflect",)] + steps2
        cls = lookup.get(frozenset(support))
    if cls is None:
        raise NoMatch(f"{x} normalizes to {support}, which is not a class of stage {stage}")
    vals = _values(cls.support, e)
    rep = family_element(cls.support, vals)
    if rep != e:
        raise ConsistencyError(f"normal form {e} differs from the family element {rep}")
    return Normalization(cls.label, steps, vals, rep)


# -- the non-splitting classes under the full group ---------------------------------

def splitting_conjugator(x: Element, max_rounds=4):
    """Translation steps carrying ``D + (translation part)`` to ``D``.

    Ad_exp(a Z) D = D + a w_Z Z for a generator Z of ad(D)-weight -w_Z, so
    the translation part can be removed order by order.  Used to document
    that the non-splitting classes are conjugate to {D} once the translations
    P1, P2, P5 and the odd translations act on them.
    """
    alg = susy_algebra()
    d = x.coefficient("D")
    if d != GradedExpr.scalar(1):
        raise UsageError("expected an element with D coefficient 1")
    w = weights()
    steps, e = [], x
    for _ in range(max_rounds):
        rest = {g: c for g, c in e.coeffs.items() if g != "D"}
        if not rest:
            return steps, e
        # [Z, D] = -w_Z Z, so Ad_exp(a Z) D = D - a w_Z Z
        Y = alg.element({g: c / w[g] for g, c in rest.items()})
        steps.append(("adjoint", Y))
        e = alg.adjoint_action(Y, e)
    if any(g != "D" for g in e.coeffs):
        raise ConsistencyError(f"translation part not removed: {e}")
    return steps, e
