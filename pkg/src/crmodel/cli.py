"""``crmodel`` command line tool.

Every command prints a human report, or JSON with ``--json``, and exits 0
exactly when all of its checks pass.  Usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog as cat
from .cr import (
    SurfaceError, field_rank_at, holomorphic_degeneracy_search, levi_at,
    relative_invariant_check, tangency_chart, tangency_divisibility,
)
from .flows import (
    FlowError, classify_point, integrate_flow, trajectory_csv, trajectory_summary,
)
from .lie import (
    HolomorphyError, MapError, NotClosed, bracket, closure_table, combination_text, pushforward,
    real_span_coords, verify_structure,
)
from .parser import ParseError, parse_field, parse_poly, parse_scalar, session_table
from .scalar import format_scalar
from .stabilizer import bracket_closure_check, graded_stabilizer, vanishing_certified
from .suites import REPORT_SCHEMA, SUITE_NAMES, run_suite

SCHEMA = REPORT_SCHEMA


class UsageError(Exception):
    pass


# -- argument helpers ---------------------------------------------------------------

def _kv(items) -> dict:
    out = {}
    for item in items or ():
        for piece in item.split(","):
            if not piece.strip():
                continue
            if "=" not in piece:
                raise UsageError(f"expected name=value, got {piece!r}")
            k, v = piece.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _params(args) -> dict:
    out = {}
    for k, v in _kv(args.param).items():
        out[k] = None if v == "formal" else parse_scalar(v)
    return out


def _weights(args) -> dict | None:
    if not args.weights:
        return None
    try:
        return {k: int(v) for k, v in _kv([args.weights]).items()}
    except ValueError:
        raise UsageError("weights must be integers, e.g. z1=1,z2=1,z3=2") from None


def _session(args):
    names = [n.strip() for n in args.vars.split(",") if n.strip()] if args.vars else None
    return session_table(names, _weights(args))


def _point(text: str, exact: bool = True):
    """Three complex or six real coordinates; exact literals stay exact."""
    items = [s.strip() for s in text.split(",")]
    if len(items) not in (3, 6):
        raise UsageError("a point needs 3 complex or 6 real coordinates")
    try:
        pt = tuple(parse_scalar(s) for s in items)
    except ParseError:
        try:
            pt = tuple(complex(s.replace("i", "j")) for s in items)
        except ValueError:
            raise UsageError(f"cannot read point {text!r}") from None
        exact = False
    if exact:
        return pt
    reals = []
    for c in pt:
        c = complex(c)
        reals += [c.real, c.imag] if len(items) == 3 else [c.real]
    return tuple(reals)


def _algebra(args):
    kw = {}
    if args.algebra == "A":
        p = _params(args)
        kw = {"s": p.get("s"), "n": p.get("n", 0)}
    return cat.make_algebra(args.algebra, **kw)


def _fields(args) -> tuple[list, list]:
    """Fields chosen by ``--algebra`` (optionally labels) or ``--field`` texts."""
    if getattr(args, "field", None):
        table, allowed = _session(args)
        fs = [parse_field(t, table, allowed=allowed) for t in args.field]
        return fs, [f"F{k + 1}" for k in range(len(fs))]
    if not getattr(args, "algebra", None):
        raise UsageError("give --algebra or --field")
    alg = _algebra(args)
    labels = getattr(args, "labels", None) or list(alg.labels)
    return [alg.field(lab) for lab in labels], labels


def _surface(args):
    return cat.make_hypersurface(args.surface, **_params(args))


def _emit(args, payload: dict, text: str, ok: bool) -> int:
    payload = {"schema": SCHEMA, "command": args.command, "passed": ok, **payload}
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)
    return 0 if ok else 1


# -- commands ----------------------------------------------------------------------

def cmd_bracket(args) -> int:
    if args.field:
        table, allowed = _session(args)
        if len(args.field) != 2:
            raise UsageError("bracket takes exactly two --field texts")
        X, Y = (parse_field(t, table, allowed=allowed) for t in args.field)
        Z = bracket(X, Y)
        return _emit(args, {"bracket": str(Z)}, str(Z), True)
    if len(args.labels or []) != 2:
        raise UsageError("bracket needs two basis labels, e.g. X2 X1")
    alg = _algebra(args)
    X, Y = (alg.field(lab) for lab in args.labels)
    Z = bracket(X, Y)
    coords = real_span_coords(alg.fields, Z)
    if coords is None:
        text = f"{Z} (outside the span)"
        return _emit(args, {"bracket": str(Z), "in_span": False}, text, False)
    combo = combination_text({k: c for k, c in enumerate(coords) if not c.is_zero()}, alg.labels)
    return _emit(args, {"bracket": combo, "field": str(Z), "in_span": True}, combo, True)


def cmd_closure(args) -> int:
    fields, labels = _fields(args)
    try:
        table = closure_table(fields, labels)
    except NotClosed as exc:
        return _emit(args, {"closed": False, "witness": str(exc)}, f"not closed: {exc}", False)
    jac = table.jacobi()
    lines = [f"[{a},{b}] = {table.entry_text(i, j)}"
             for i, a in enumerate(labels) for j, b in enumerate(labels) if i < j and table.get(i, j)]
    lines.append(f"Jacobi: {'holds' if jac else 'FAILS'}")
    return _emit(args, {"closed": True, "jacobi": jac, "table": table.to_json()}, "\n".join(lines), jac)


def cmd_verify_structure(args) -> int:
    alg = _algebra(args)
    resc = None if args.raw else alg.rescaling
    rep = verify_structure(alg.fields, cat.abstract_table(), resc)
    if rep.ok:
        text = f"{alg.name}: matches the abstract table with rescaling " + \
            ", ".join(format_scalar(d) for d in alg.rescaling)
    else:
        text = f"{alg.name}: deviations\n" + "\n".join(
            f"  [{a},{b}] found {f}, expected {e}" for a, b, f, e in rep.deviations)
        if rep.not_closed:
            text += f"\n  not closed: {rep.not_closed}"
    return _emit(args, {"algebra": alg.name, "report": rep.to_json(),
                        "rescaling": [format_scalar(d) for d in alg.rescaling]}, text, rep.ok)


def cmd_tangency(args) -> int:
    fields, labels = _fields(args)
    M = _surface(args)
    method = args.method
    if method == "auto":
        method = "chart" if M.chart is not None else "divide"
    test = tangency_chart if method == "chart" else tangency_divisibility
    res = {lab: test(X, M) for lab, X in zip(labels, fields)}
    ok = all(res.values())
    text = "\n".join(f"{lab}: {'tangent' if v else 'NOT tangent'}" for lab, v in res.items())
    return _emit(args, {"surface": M.name, "method": method, "tangent": res}, text, ok)


def cmd_levi(args) -> int:
    M = _surface(args)
    rep = levi_at(M, _point(args.point))
    text = (f"signature {tuple(rep.signature)} (positive, negative, zero); rank {rep.rank}; "
            f"det {format_scalar(rep.determinant)}; orientation {rep.orientation}")
    return _emit(args, {"surface": M.name, "levi": rep.to_json(), "rank": rep.rank}, text, True)


def cmd_rank(args) -> int:
    fields, _ = _fields(args)
    r = field_rank_at(fields, _point(args.point))
    ok = args.expect is None or r == args.expect
    return _emit(args, {"rank": r}, f"rank {r}", ok)


def cmd_invariant(args) -> int:
    table, allowed = _session(args)
    cases = []
    if args.poly:
        cases.append(("input", parse_poly(args.poly, table, allowed), args.weight))
    else:
        cases = [("P", cat.P_INVARIANT, 2), ("Q", cat.Q_INVARIANT, 3)]
    action = cat.make_map(args.map, **_params(args))
    res = {}
    for name, f, w in cases:
        if w is None:
            raise UsageError("--weight is required with --poly")
        res[name] = relative_invariant_check(f, action, w, args.carrier)
    text = "\n".join(f"{n}: {'relative invariant of weight %d' % w if res[n] else 'NOT invariant'}"
                     for n, _, w in cases)
    return _emit(args, {"map": action.name, "results": res}, text, all(res.values()))


def cmd_pushforward(args) -> int:
    F = cat.make_map(args.map, **_params(args))
    fields, labels = _fields(args)
    out = {lab: str(pushforward(F, X)) for lab, X in zip(labels, fields)}
    return _emit(args, {"map": F.name, "fields": out},
                 "\n".join(f"{k} -> {v}" for k, v in out.items()), True)


def _range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise UsageError("weight range looks like -3:5") from None


def cmd_stabilizer(args) -> int:
    M = _surface(args)
    lo, hi = _range(args.weight_range)
    comps = graded_stabilizer(M, lo, hi, weights=_weights(args))
    closed = bracket_closure_check(comps)
    dims = [c.dimension for c in comps]
    lines = [f"t{c.weight}: dim {c.dimension}" + (": " + "; ".join(map(str, c.basis)) if args.verbose else "")
             for c in comps]
    lines.append(f"total {sum(dims)}; closed under brackets: {closed}; "
                 f"vanishing certified: {vanishing_certified(comps)}")
    return _emit(args, {"surface": M.name, "dims": dims, "total": sum(dims), "closed": closed,
                        "components": [c.to_json() for c in comps]}, "\n".join(lines), closed)


def cmd_degeneracy(args) -> int:
    M = _surface(args)
    res = holomorphic_degeneracy_search(M, args.degree_bound, args.method)
    text = (f"{M.name}: {res.dimension} degenerate field(s) of degree <= {args.degree_bound}"
            + "".join(f"\n  {X}" for X in res.fields))
    ok = args.expect is None or res.degenerate == (args.expect == "nonempty")
    return _emit(args, res.to_json(), text, ok)


def cmd_flow(args) -> int:
    fields, labels = _fields(args)
    if len(fields) != 1:
        raise UsageError("flow integrates one field; pick a label")
    start = _point(args.start, exact=False)
    traj = integrate_flow(fields[0], start, args.time, args.step)
    summary = trajectory_summary(traj)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(trajectory_csv(traj, args.every))
    d = summary["drift"]
    ok = d["mu2"] is not None and d["mu2"] <= args.tolerance
    text = (f"{labels[0]}: {summary['steps']} steps, T={summary['T']:.6g}; drift P={d['P']}, "
            f"Q={d['Q']}, mu2={d['mu2']}; class {summary['class_start']['kind']} -> "
            f"{summary['class_end']['kind']}")
    return _emit(args, {"summary": summary}, text, ok)


def cmd_classify(args) -> int:
    pt = _point(args.point)
    cls = classify_point(pt, tol=args.tolerance)
    mu = "" if cls.mu2 is None else f", mu2 = {cls.mu2:.12g}"
    return _emit(args, {"class": cls.to_json()}, f"{cls.kind}{mu}", True)


def cmd_suite(args) -> int:
    names = args.names or list(SUITE_NAMES)
    bad = [n for n in names if n not in SUITE_NAMES]
    if bad:
        raise UsageError(f"unknown suite(s) {bad}; choose from {', '.join(SUITE_NAMES)}")
    only = args.only if args.only is not None else None
    reports = [run_suite(n, only) for n in names]
    ok = all(r.passed for r in reports)
    return _emit(args, {"suites": [r.to_json() for r in reports]},
                 "\n".join(r.text() for r in reports), ok)


def cmd_catalog(args) -> int:
    if args.json:
        print(cat.manifest())
        return 0
    for e in cat.ENTRIES.values():
        ps = ", ".join(f"{n} ({r})" for n, r in e.parameters)
        print(f"{e.kind:13s} {e.name:22s} {ps}")
    return 0


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--vars", help="comma separated session variables")
    common.add_argument("--weights", help="coordinate weights, e.g. z1=1,z2=1,z3=2")
    common.add_argument("--tolerance", type=float, default=1e-9, help="numeric tolerance")
    common.add_argument("--param", action="append", metavar="NAME=VALUE",
                        help="parameter value (number, or 'formal'); repeatable")

    p = argparse.ArgumentParser(prog="crmodel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    def field_args(sp, labels_nargs="*"):
        sp.add_argument("--algebra", choices=cat.ALGEBRA_NAMES)
        sp.add_argument("--field", action="append", help="field text such as 'z*d/dz'")
        sp.add_argument("labels", nargs=labels_nargs, help="basis labels (X3 X2 X1 X1' X0)")

    sp = add("bracket", cmd_bracket, "bracket of two fields")
    field_args(sp)
    sp = add("closure", cmd_closure, "structure constants of a basis")
    field_args(sp)
    sp = add("verify-structure", cmd_verify_structure, "compare with the abstract relations")
    sp.add_argument("--algebra", choices=cat.ALGEBRA_NAMES, required=True)
    sp.add_argument("--raw", action="store_true", help="skip the recorded rescaling")
    sp = add("tangency", cmd_tangency, "tangency of fields to a hypersurface")
    field_args(sp)
    sp.add_argument("--surface", choices=cat.HYPERSURFACE_NAMES, required=True)
    sp.add_argument("--method", choices=("auto", "chart", "divide"), default="auto")
    sp = add("levi", cmd_levi, "Levi form signature at an exact point")
    sp.add_argument("--surface", choices=cat.HYPERSURFACE_NAMES, required=True)
    sp.add_argument("--point", required=True, help="x1,y1,x2,y2,x3,y3 or three complex numbers")
    sp = add("rank", cmd_rank, "real rank of fields at a point")
    field_args(sp)
    sp.add_argument("--point", required=True)
    sp.add_argument("--expect", type=int)
    sp = add("invariant", cmd_invariant, "relative invariance under a group family")
    sp.add_argument("--poly", help="polynomial text (default: P and Q)")
    sp.add_argument("--weight", type=int)
    sp.add_argument("--map", default="full_action", choices=cat.MAP_NAMES)
    sp.add_argument("--carrier", default="lam")
    sp = add("pushforward", cmd_pushforward, "push fields through a catalog map")
    field_args(sp)
    sp.add_argument("--map", required=True, choices=cat.MAP_NAMES)
    sp = add("stabilizer", cmd_stabilizer, "graded infinitesimal automorphisms")
    sp.add_argument("--surface", choices=cat.HYPERSURFACE_NAMES, required=True)
    sp.add_argument("--weight-range", default="-3:5")
    sp.add_argument("--verbose", "-v", action="store_true")
    sp = add("degeneracy", cmd_degeneracy, "bounded search for holomorphic degeneracy")
    sp.add_argument("--surface", choices=cat.HYPERSURFACE_NAMES, required=True)
    sp.add_argument("--degree-bound", type=int, default=1)
    sp.add_argument("--method", choices=("ideal", "chart"), default="ideal")
    sp.add_argument("--expect", choices=("empty", "nonempty"))
    sp = add("flow", cmd_flow, "integrate a real flow and monitor the invariants")
    field_args(sp)
    sp.add_argument("--start", required=True)
    sp.add_argument("--time", type=float, default=1.0)
    sp.add_argument("--step", type=float, default=1e-3)
    sp.add_argument("--csv", help="write the trajectory CSV here")
    sp.add_argument("--every", type=int, default=1, help="CSV sample stride")
    sp = add("classify", cmd_classify, "orbit class of a point")
    sp.add_argument("--point", required=True)
    sp.set_defaults(tolerance=1e-12)
    sp = add("suite", cmd_suite, "run verification suites")
    sp.add_argument("names", nargs="*", help=f"suites ({', '.join(SUITE_NAMES)}); default all")
    sp.add_argument("--only", action="append", help="keep checks whose name contains this")
    add("catalog", cmd_catalog, "list catalog entries")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ParseError, HolomorphyError, SurfaceError, MapError, cat.CatalogError,
            FlowError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"crmodel {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
