"""Command-line front end: ``susyms <command> ...``.

Exit codes: 0 when every requested check passes, 1 on a verification
failure, 2 on a usage error.  Reports are JSON (``"schema": 1``) with floats
written to 17 significant digits.  If ``SUSYMS_CACHE_DIR`` is set, outputs
of the deterministic table and classification commands are cached there.
"""

import argparse
import hashlib
import json
import os
import re
import sys
from pathlib import Path

SCHEMA = 1
CACHE_ENV = "SUSYMS_CACHE_DIR"

_FLOAT = "\x00F"


def _mark_floats(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return _FLOAT + format(obj, ".17g")
    if isinstance(obj, dict):
        return {str(k): _mark_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark_floats(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return _mark_floats(obj.item())
    return obj


def dumps(obj) -> str:
    """JSON with fixed 17-significant-digit floats (byte-stable)."""
    text = json.dumps(_mark_floats(obj), indent=2, sort_keys=False, ensure_ascii=False)

    def unquote(m):
        v = m.group(1)
        return v if re.fullmatch(r"-?[0-9.e+-]+", v) else json.dumps(v)
    return re.sub(r'"\\u0000F([^"]*)"', unquote, text)


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliUsageError(message)


def _report(payload, ok=True):
    payload = {"schema": SCHEMA, "ok": ok, **payload}
    return dumps(payload), 0 if ok else 1


def _cached(key, compute):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return compute()
    path = Path(root) / (hashlib.sha256(key.encode()).hexdigest()[:24] + ".out")
    if path.exists():
        text, code = path.read_text().split("\n", 1)[1], int(path.read_text().split("\n", 1)[0])
        return text, code
    text, code = compute()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(f"{code}\n{text}")
    return text, code


# -- commands -----------------------------------------------------------------------

def cmd_tables(args):
    from .superalgebra import CLASSICAL_ORDER, TABLE1_ORDER, classical_algebra, susy_algebra

    def compute():
        if args.algebra == "susy":
            table, order = susy_algebra().table, TABLE1_ORDER
        else:
            table, order = classical_algebra().table, CLASSICAL_ORDER
        if args.format == "latex":
            return table.to_latex(order), 0
        if args.format == "markdown":
            return table.to_markdown(order), 0
        return dumps(table.to_dict(order)), 0
    return _cached(f"tables|{args.algebra}|{args.format}", compute)


def cmd_verify_extension(args):
    from .serialize import serialize
    from .supercalculus import extension_difference
    diff = extension_difference(literal=args.literal)
    ok = diff.is_zero()
    return _report({"check": "operator form == component form", "literal": args.literal,
                    "difference": serialize(diff)}, ok)


def cmd_verify_identities(args):
    from .supercalculus import check_operator_identities
    rep = check_operator_identities()
    return _report({"identities": rep}, all(rep.values()))


def cmd_classify(args):
    from .classification import classify

    def compute():
        items = [c.to_dict() for c in classify(args.stage, args.dedupe_reflection)]
        stage = "deduped" if args.dedupe_reflection else args.stage
        return dumps({"schema": SCHEMA, "stage": stage, "count": len(items), "classes": items}), 0
    return _cached(f"classify|{args.stage}|{args.dedupe_reflection}", compute)


def cmd_reduce(args):
    label = args.subalgebra
    if label in ("e4", "e4+me3"):
        from .classical import reduce_classical
        r = reduce_classical(label)
        return _report({"subalgebra": label, "ode": r.text, "matches_printed": r.matches}, r.matches)
    if args.ansatz != "bodiless":
        raise CliUsageError(f"only the bodiless ansatz is available for {label}")
    from .reduction import PRINTED_ODES, reduce_bodiless
    r = reduce_bodiless(label)
    payload = {"subalgebra": label, "ansatz": "bodiless", "ode": r.text}
    ok = True
    if label in PRINTED_ODES:
        ok = r.matches(PRINTED_ODES[label])
        payload["printed_ode"] = PRINTED_ODES[label]
        payload["matches_printed"] = ok
    return _report(payload, ok)


def _params(items):
    out = {}
    for item in items or []:
        name, _, val = item.partition("=")
        if not val:
            raise CliUsageError(f"bad parameter {item!r}; use NAME=VALUE")
        out[name.strip()] = float(val)
    return out


def cmd_verify_solution(args):
    from .reduction import printed_solutions, parse_grid, verify_numeric, verify_symbolic
    if bool(args.file) == bool(args.name):
        raise CliUsageError("give exactly one of --file or --name")
    if args.file:
        from .parser import parse_expression
        try:
            src = Path(args.file).read_text()
        except OSError as exc:
            raise CliUsageError(str(exc))
        Phi = parse_expression(src)
        source = args.file
    else:
        sols = printed_solutions()
        if args.name not in sols:
            raise CliUsageError(f"unknown solution {args.name!r}; choose from {', '.join(sols)}")
        Phi = sols[args.name]
        source = args.name
    if args.numeric:
        try:
            grid = parse_grid(args.grid)
        except ValueError:
            raise CliUsageError(f"bad grid {args.grid!r}; use x=LO:HI:N,y=LO:HI:N")
        rep = verify_numeric(Phi, grid=grid, parameters=_params(args.param))
    else:
        rep = verify_symbolic(Phi)
    ok = rep.status == "identically zero" or (args.accept_constraints and rep.status == "constraint variety")
    return _report({"source": source, "mode": "numeric" if args.numeric else "symbolic", **rep.to_dict()}, ok)


def cmd_classical(args):
    from . import classical as C
    what = args.what
    if what == "symmetries":
        import sympy as sp
        rep = C.symmetry_report()
        control = "x*d_u (control)"
        ok = all(v == 0 for k, v in rep.items() if k != control) and rep[control] != 0
        return _report({"on_shell_residuals": {k: sp.sstr(v) for k, v in rep.items()}}, ok)
    if what == "classify":
        reps = C.classical_classify(include_extra=args.include_extra)
        return _report({"count": len(reps), "classes": reps}, True)
    if what == "reduce":
        out = {}
        for label in ("e4", "e4+me3"):
            r = C.reduce_classical(label)
            out[label] = {"ode": r.text, "matches_printed": r.matches}
        return _report({"reductions": out}, all(v["matches_printed"] for v in out.values()))
    if what == "verify":
        checks = []
        if args.solution in ("e4", "all"):
            for s0 in (0.5, 1.0, 2.0):
                for k0 in (0.0, 1.0):
                    checks.append(C.verify_radial_fd(s0, k0).to_dict())
                checks.append(C.verify_radial_abel(s0).to_dict())
        if args.solution in ("e4+me3", "all"):
            checks.append(C.verify_helicoidal_abel(1.0, 0.7, absolute=True).to_dict())
            checks.append(C.verify_helicoidal_abel(1.0, 0.7, absolute=False).to_dict())
        return _report({"checks": checks}, all(c["ok"] for c in checks))
    raise CliUsageError(f"unknown classical command {what!r}")


def cmd_elliptic(args):
    from .elliptic import elliptic_integral
    val = elliptic_integral(args.kind, args.phi, args.k)
    return _report({"kind": args.kind, "phi": args.phi, "k": args.k, "value": val}, True)


def build_parser():
    p = _Parser(prog="susyms", description="Grassmann-valued symmetry analysis of the minimal surface equation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("tables", help="structure tables")
    t.add_argument("--algebra", choices=["susy", "classical"], default="susy")
    t.add_argument("--format", choices=["json", "latex", "markdown"], default="json")
    t.set_defaults(fn=cmd_tables)

    e = sub.add_parser("verify-extension", help="operator form against component form")
    e.add_argument("--literal", action="store_true", help="use the typeset -Phi_yy*theta1*theta2 factor")
    e.set_defaults(fn=cmd_verify_extension)

    i = sub.add_parser("verify-identities", help="(anti)commutators of D1, D2, Q1, Q2")
    i.set_defaults(fn=cmd_verify_identities)

    c = sub.add_parser("classify", help="one-dimensional subalgebra classes")
    c.add_argument("--stage", choices=["s1", "s2", "s", "tilde-s", "full"], default="full")
    c.add_argument("--dedupe-reflection", action="store_true")
    c.set_defaults(fn=cmd_classify)

    r = sub.add_parser("reduce", help="symmetry reduction to an ODE")
    r.add_argument("--subalgebra", required=True, choices=["L74", "G136", "L72", "e4", "e4+me3"])
    r.add_argument("--ansatz", choices=["bodiless"], default="bodiless")
    r.set_defaults(fn=cmd_reduce)

    v = sub.add_parser("verify-solution", help="residual of a superfield")
    v.add_argument("--file", help="expression source file")
    v.add_argument("--name", help="built-in solution (G1, G4, G15, G66i, ...)")
    v.add_argument("--numeric", action="store_true")
    v.add_argument("--grid", help="x=LO:HI:N,y=LO:HI:N")
    v.add_argument("--param", action="append", help="NAME=VALUE for numeric mode")
    v.add_argument("--accept-constraints", action="store_true",
                   help="count a residual vanishing on a constraint variety as a pass")
    v.set_defaults(fn=cmd_verify_solution)

    k = sub.add_parser("classical", help="classical minimal surface equation")
    k.add_argument("what", choices=["symmetries", "classify", "reduce", "verify"])
    k.add_argument("--include-extra", action="store_true", help="add the family {e7 + a e4}")
    k.add_argument("--solution", choices=["e4", "e4+me3", "all"], default="all")
    k.set_defaults(fn=cmd_classical)

    el = sub.add_parser("elliptic", help="incomplete elliptic integrals")
    el.add_argument("kind", choices=["F", "E"])
    el.add_argument("--phi", type=float, required=True)
    el.add_argument("--k", type=float, required=True)
    el.set_defaults(fn=cmd_elliptic)
    return p


def run(argv=None):
    """Return (text, exit code) without printing."""
    from .errors import DomainError, SusyError, UsageError
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except (CliUsageError, UsageError, DomainError) as exc:
        payload = {"schema": SCHEMA, "ok": False, "error": type(exc).__name__, "message": str(exc)}
        point = getattr(exc, "point", None)
        if point is not None:
            payload["point"] = list(point) if isinstance(point, tuple) else point
        return dumps(payload), 2
    except (SusyError, SyntaxError) as exc:
        return dumps({"schema": SCHEMA, "ok": False, "error": type(exc).__name__, "message": str(exc)}), 1


def main(argv=None):
    text, code = run(argv)
    stream = sys.stdout if code == 0 else sys.stderr if code == 2 else sys.stdout
    print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
