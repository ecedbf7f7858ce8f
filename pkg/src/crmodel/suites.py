"""Scripted verification batteries over the catalog.

Each suite is a list of named checks.  A check returns ``(passed, detail)``
where ``detail`` is a short human string or a JSON-able witness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import catalog as cat
from .cr import (
    chart_pullback, field_rank_at, holomorphic_degeneracy_search, levi_at,
    orbit_preserved, relative_invariant_check, tangency_chart, tangency_divisibility,
)
from .flows import (
    batch_ratio_drift, classify_point, integrate_batch, integrate_flow, random_starts, rk4_exact,
)
from .lie import (
    HoloVField, proportionality, pushforward, real_independent, same_real_span, verify_structure,
)
from .poly import Poly
from .scalar import I, SQRT2, ExactScalar, format_scalar
from .stabilizer import bracket_closure_check, graded_stabilizer, vanishing_certified

__all__ = ["Check", "SuiteReport", "run_suite", "run_all", "SUITE_NAMES", "REPORT_SCHEMA"]

REPORT_SCHEMA = "crmodel.report/1"


@dataclass
class Check:
    name: str
    passed: bool
    detail: object = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteReport:
    name: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"schema": REPORT_SCHEMA, "suite": self.name, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}

    def text(self) -> str:
        lines = [f"suite {self.name}: {'PASS' if self.passed else 'FAIL'} "
                 f"({sum(c.passed for c in self.checks)}/{len(self.checks)})"]
        for c in self.checks:
            d = c.detail if isinstance(c.detail, str) else json.dumps(c.detail, sort_keys=True)
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}" + (f": {d}" if d else ""))
        return "\n".join(lines)


# -- shared fixtures -----------------------------------------------------------------

def _algebra_cases():
    return [
        ("g", cat.make_algebra("g")),
        ("g_tilde", cat.make_algebra("g_tilde")),
        ("A(i)", cat.make_algebra("A", s=I)),
        ("A(0)", cat.make_algebra("A", s=0)),
        ("A(1)", cat.make_algebra("A", s=1)),
        ("A0", cat.make_algebra("A0")),
        ("A1", cat.make_algebra("A1")),
        ("B", cat.make_algebra("B")),
    ]


def _all_tangent(fields, M, how) -> tuple:
    test = tangency_chart if how == "chart" else tangency_divisibility
    bad = [lab for lab, X in zip(cat.LABELS, fields) if not test(X, M)]
    return not bad, ("all five fields tangent" if not bad else {"not_tangent": bad})


def _proportional_to(rho: Poly, other: Poly):
    """Nonzero constant ``c`` with ``rho == c * other`` (else ``None``)."""
    if not other or not rho:
        return None
    e, v = next(iter(other.terms.items()))
    c = rho.terms.get(e)
    if c is None:
        return None
    c = c / v
    return c if rho == other.scale(c) else None


# -- brackets ------------------------------------------------------------------------

def _brackets():
    abstract = cat.abstract_table()
    checks = []
    for label, alg in _algebra_cases():
        def run(alg=alg):
            rep = verify_structure(alg.fields, abstract, alg.rescaling)
            if rep.ok:
                return True, "closed, Jacobi exact, only the recorded rescaling " + \
                    "(" + ", ".join(format_scalar(d) for d in alg.rescaling) + ")"
            return False, rep.to_json()
        checks.append((f"structure {label}", run))

    def independence():
        bad = [lab for lab, alg in _algebra_cases() if not real_independent(alg.fields)]
        return not bad, ("every basis is really independent" if not bad else {"dependent": bad})
    checks.append(("bases independent", independence))

    def negative():
        alg = cat.make_algebra("A", s=1, n=1)
        rep = verify_structure(alg.fields, abstract, alg.rescaling)
        return (not rep.ok and bool(rep.deviations),
                {"deviations_found": [f"[{a},{b}] = {f}" for a, b, f, _ in rep.deviations]})
    checks.append(("nonzero n is detected as a deviation", negative))
    return checks


# -- tangency -----------------------------------------------------------------------

def _tangency():
    g, gt = cat.make_algebra("g").fields, cat.make_algebra("g_tilde").fields
    return [
        ("g tangent to the cubic C", lambda: _all_tangent(g, cat.make_hypersurface("cubic_C"), "chart")),
        ("g_tilde tangent to the tube cubic",
         lambda: _all_tangent(gt, cat.make_hypersurface("tube_cubic"), "chart")),
        ("g_tilde tangent to N_minus (formal nu)",
         lambda: _all_tangent(gt, cat.make_hypersurface("N_minus"), "divide")),
        ("g_tilde tangent to N_plus (formal nu)",
         lambda: _all_tangent(gt, cat.make_hypersurface("N_plus"), "divide")),
        ("g_tilde tangent to N_zero",
         lambda: _all_tangent(gt, cat.make_hypersurface("N_zero"), "chart")),
        ("A1 tangent to S (formal gamma)",
         lambda: _all_tangent(cat.make_algebra("A1").fields, cat.make_hypersurface("S"), "chart")),
        ("A0 tangent to Q (formal beta)",
         lambda: _all_tangent(cat.make_algebra("A0").fields, cat.make_hypersurface("Q"), "chart")),
        ("B tangent to Pi (formal delta)",
         lambda: _all_tangent(cat.make_algebra("B").fields, cat.make_hypersurface("Pi"), "chart")),
        ("g tangent to Q = 0", lambda: _all_tangent(g, cat.make_hypersurface("orbit_Q_zero"), "chart")),
        ("g tangent to Q^2 = mu2 P^3 (formal mu2)",
         lambda: _all_tangent(g, cat.make_hypersurface("M_minus"), "divide")),
        ("i d/dw2 is not tangent to C", _i_dw2_not_tangent),
    ]


def _i_dw2_not_tangent():
    X = HoloVField(cat.T, cat.AMBIENT, [Poly.zero(cat.T), Poly.const(cat.T, I), Poly.zero(cat.T)])
    ok = not tangency_chart(X, cat.make_hypersurface("cubic_C"))
    return ok, "rejected" if ok else "wrongly accepted"


# -- invariants ---------------------------------------------------------------------

def _invariants():
    P, Q = cat.P_INVARIANT, cat.Q_INVARIANT

    def rel(f, w):
        def run():
            ok = relative_invariant_check(f, cat.make_map("full_action"), w)
            return ok, f"pullback equals lam^{w} times the invariant" if ok else "identity fails"
        return run

    def weights():
        wp, wq = P.weight_interval(), Q.weight_interval()
        return wp == (2, 2) and wq == (3, 3), {"P": list(wp), "Q": list(wq)}

    def tube_forms():
        F = cat.make_map("tube_to_ambient")
        A, B = cat._tube_A()
        cp = _proportional_to(F.pull_real(P), B)
        cq = _proportional_to(F.pull_real(Q), A)
        ok = cp is not None and cq is not None
        return ok, {"P_factor": format_scalar(cp) if cp is not None else None,
                    "Q_factor": format_scalar(cq) if cq is not None else None}

    def quartic():
        rho = cat.make_hypersurface("N_minus", nu=4).rho
        y1, y2, y3 = (cat.v(n) for n in ("y1", "y2", "y3"))
        quart = (y3 ** 2 - (y1 ** 2 * y2 ** 2).scale(3) - (y1 * y2 * y3).scale(6)
                 + (y1 ** 3 * y3).scale(4) + (y2 ** 3).scale(4))
        return rho == quart, str(rho)

    surfaces = {"A": ("N_minus", "N_plus", "tube_cubic", "N_zero"), "A1": ("S",),
                "A0": ("Q",), "B": ("Pi",)}

    def families():
        bad = [f"{fam} on {s}" for alg, fams in cat.GROUP_FAMILIES.items()
               for s in surfaces[alg] for fam in fams
               if not orbit_preserved(cat.make_hypersurface(s), cat.make_map(fam))]
        return not bad, "every family preserves its orbit family" if not bad else {"broken": bad}

    return [
        ("P relative invariant of weight 2", rel(P, 2)),
        ("Q relative invariant of weight 3", rel(Q, 3)),
        ("P and Q weight-homogeneous", weights),
        ("P and Q in tube coordinates", tube_forms),
        ("N_minus at nu=4 expands to the quartic with +4*y2^3", quartic),
        ("group families preserve orbit families", families),
    ]


# -- equivalences ------------------------------------------------------------------

def _equivalences():
    checks = []

    def map6():
        F = cat.make_map("tube_to_ambient")
        gt, g = cat.make_algebra("g_tilde").fields, cat.make_algebra("g").fields
        pushed = [pushforward(F, X) for X in gt]
        factors = [proportionality(Xp, Y) for Xp, Y in zip(pushed, g)]
        ok = F.verified and same_real_span(pushed, g) and all(
            c is not None and c.is_real() and not c.is_zero() for c in factors)
        return ok, {"span_equal": same_real_span(pushed, g),
                    "factors": {lab: (format_scalar(c) if c is not None else None)
                                for lab, c in zip(cat.LABELS, factors)}}
    checks.append(("tube map carries g_tilde onto g", map6))

    def map6_cubic():
        F = cat.make_map("tube_to_ambient")
        C, Ct = cat.make_hypersurface("cubic_C"), cat.make_hypersurface("tube_cubic")
        ok = all(chart_pullback(F.pull_real(r), Ct.chart).is_zero() for r in C.rhos)
        return ok, "tube cubic lands in C" if ok else "tube cubic leaves C"
    checks.append(("tube map sends the tube cubic into C", map6_cubic))

    def flip():
        F = cat.make_map("flip")
        C = cat.make_hypersurface("cubic_C")
        inv = F.then(F)
        ok = (all(chart_pullback(F.pull_real(r), C.chart).is_zero() for r in C.rhos)
              and inv.forward == cat.make_map("identity_ambient").forward)
        return ok, "involution preserving C" if ok else "fails"
    checks.append(("flip preserves C", flip))

    def chain():
        F = cat.make_map("orbit_to_quadric")
        got = F.pull_real(cat.make_hypersurface("quadric_hermitian").rho)
        target = cat.make_hypersurface("orbit_Q_zero").rho
        c = _proportional_to(got, target)
        mid = cat.make_map("kill_pluriharmonic").pull_real(cat.make_hypersurface("quadric_hermitian").rho)
        return c is not None, {"factor": format_scalar(c) if c is not None else None,
                               "after_first_step": str(mid)}
    checks.append(("Q = 0 orbit to the Hermitian quadric", chain))

    def herm():
        F = cat.make_map("hermitian_to_indef")
        c = _proportional_to(F.pull_real(cat.make_hypersurface("quadric_indef").rho),
                             cat.make_hypersurface("quadric_hermitian").rho)
        return c is not None, {"factor": format_scalar(c) if c is not None else None}
    checks.append(("Hermitian quadric to the indefinite quadric", herm))

    def qbeta():
        F = cat.make_map("qbeta_to_quadric")
        c = _proportional_to(F.pull_real(cat.make_hypersurface("quadric_indef").rho),
                             cat.make_hypersurface("Q").rho)
        return c is not None and c.is_rational(), {"factor": format_scalar(c) if c is not None else None}
    checks.append(("Q_beta to the indefinite quadric (formal beta)", qbeta))

    def cone():
        F = cat.make_map("s0_to_cone")
        got = F.pull_real(cat.make_hypersurface("light_cone_tube").rho)
        ok = got == cat.make_hypersurface("S", gamma=0).rho
        return ok, str(got)
    checks.append(("S_0 to the light-cone tube", cone))

    def s_norm():
        out = {}
        ok = True
        for gamma, b, base in ((4, 2, 1), (2, SQRT2, 1), (-4, 2, -1)):
            F = cat.make_map("s_normalize", a=1, b=b)
            c = _proportional_to(F.pull_real(cat.make_hypersurface("S", gamma=gamma).rho),
                                 cat.make_hypersurface("S", gamma=base).rho)
            out[f"gamma={gamma}"] = format_scalar(c) if c is not None else None
            ok = ok and c is not None
        return ok, out
    checks.append(("S_gamma rescales to S_1 or S_-1", s_norm))

    def a_family():
        out = {}
        for s, t in ((1, 2), (1, -1), (2, 3)):
            F = cat.make_map("a_family_rescale", s=s, t=t)
            pushed = [pushforward(F, X) for X in cat.make_algebra("A", s=s).fields]
            out[f"{s}->{t}"] = same_real_span(pushed, cat.make_algebra("A", s=t).fields)
        return all(out.values()), out
    checks.append(("A(s) and A(t) linearly equivalent", a_family))

    def witness(map_name, src, dst):
        def run():
            F = cat.make_map(map_name)
            pushed = [pushforward(F, X) for X in src().fields]
            ok = same_real_span(pushed, dst().fields)
            return ok, "spans agree" if ok else [str(X) for X in pushed]
        return run
    checks.append(("A(1) normalizes to A1",
                   witness("a1_normalize", lambda: cat.make_algebra("A", s=1), lambda: cat.make_algebra("A1"))))
    checks.append(("A(i) is g", witness("a_i_to_g", lambda: cat.make_algebra("A", s=I),
                                         lambda: cat.make_algebra("g"))))
    checks.append(("A(0) is A0", witness("identity_tube", lambda: cat.make_algebra("A", s=0),
                                          lambda: cat.make_algebra("A0"))))

    def inverses():
        bad = []
        for name in cat.MAP_NAMES:
            try:
                F = cat.make_map(name, **_MAP_SAMPLE_PARAMS.get(name, {}))
            except cat.CatalogError:
                bad.append(name)
                continue
            if F.inverse is not None and not F.verified:
                bad.append(name)
        return not bad, "all recorded inverses verified" if not bad else {"bad": bad}
    checks.append(("map inverses", inverses))
    return checks


_MAP_SAMPLE_PARAMS = {
    "s_normalize": {"a": 1, "b": 2},
    "a_family_rescale": {"s": 1, "t": 2},
}


# -- Levi forms ---------------------------------------------------------------------

LEVI_CASES = (
    # (label, surface, params, point, expected signature or class)
    ("quadric_indef", {}, (0, 0, 0, 0, 0, 0), "indefinite"),
    ("S", {"gamma": 1}, (0, 1, 0, 1, 0, 2), "definite"),
    ("S", {"gamma": -1}, (0, 1, 0, 1, 0, 0), "indefinite"),
    ("Pi", {"delta": 2}, (0, 1, 0, 2, 0, 0), "flat"),
    ("Pi", {"delta": -3}, (0, 1, 0, -3, 0, 0), "flat"),
    ("N_minus", {"nu": 1}, (0, 0, 0, -1, 0, 1), "indefinite"),
    ("N_minus", {"nu": 2}, (0, 0, 0, -2, 0, 4), "indefinite"),
    ("N_minus", {"nu": 3}, (0, 0, 0, -3, 0, 9), "indefinite"),
    ("N_minus", {"nu": 4}, (0, 0, 0, -4, 0, 16), "rank1"),
    ("N_minus", {"nu": 5}, (0, 0, 0, -5, 0, 25), "definite"),
    ("N_minus", {"nu": 8}, (0, 0, 0, -8, 0, 64), "definite"),
)


def levi_class(sig) -> str:
    p, n, z = sig
    if z == 2:
        return "flat"
    if z == 1:
        return "rank1"
    return "indefinite" if p and n else "definite"


def _levi():
    checks = []
    for name, params, pt, want in LEVI_CASES:
        def run(name=name, params=params, pt=pt, want=want):
            M = cat.make_hypersurface(name, **params)
            rep = levi_at(M, pt)
            got = levi_class(rep.signature)
            return got == want, {"signature": list(rep.signature), "class": got,
                                 "determinant": format_scalar(rep.determinant),
                                 "orientation": rep.orientation}
        label = name + "".join(f"[{k}={v}]" for k, v in params.items())
        checks.append((f"Levi {label} {want}", run))
    return checks


# -- ranks and degeneracy -----------------------------------------------------------

def cubic_points(n: int = 12) -> list:
    """Exact points of C from its chart ``y2 = |z|^2, y3 = 2 |z|^2 Re z``."""
    pts = []
    for k in range(n):
        x1, y1 = Fraction(k - 5, 3), Fraction((3 * k) % 7 - 3, 2)
        x2, x3 = Fraction(2 * k - 7, 5), Fraction(k * k % 11 - 5, 4)
        r = x1 * x1 + y1 * y1
        pts.append((x1, y1, x2, r, x3, 2 * r * x1))
    return pts


def off_cubic_points(n: int = 12) -> list:
    pts = []
    for k in range(n):
        x1, y1 = Fraction(k - 5, 3), Fraction((3 * k) % 7 - 3, 2)
        r = x1 * x1 + y1 * y1
        pts.append((x1, y1, Fraction(k, 7), r + 1 + Fraction(k, 5), Fraction(-k, 3), 2 * r * x1 + k))
    return pts


def _rank():
    g = cat.make_algebra("g").fields
    C = cat.make_hypersurface("cubic_C")

    def on():
        pts = cubic_points()
        ranks = [field_rank_at(g, p) for p in pts]
        return all(C.contains(p) for p in pts) and set(ranks) == {4}, {"ranks": ranks}

    def off():
        pts = off_cubic_points()
        ranks = [field_rank_at(g, p) for p in pts]
        return not any(C.contains(p) for p in pts) and set(ranks) == {5}, {"ranks": ranks}

    def tube():
        gt = cat.make_algebra("g_tilde").fields
        pts = [(Fraction(k, 2), Fraction(k - 3, 4), Fraction(1, k + 1), Fraction(k - 3, 4) ** 2,
                Fraction(k, 3), Fraction(k - 3, 4) ** 3) for k in range(10)]
        ranks = [field_rank_at(gt, p) for p in pts]
        return set(ranks) == {4}, {"ranks": ranks}

    return [("rank 4 on C", on), ("rank 5 off C", off), ("rank 4 on the tube cubic", tube)]


DEGENERACY_CASES = (
    ("Pi", {"delta": 2}, 1, "ideal", True),
    ("Pi", {"delta": 2}, 1, "chart", True),
    ("sphere_cylinder", {}, 1, "ideal", True),
    ("quadric_indef", {}, 2, "ideal", False),
    ("quadric_indef", {}, 2, "chart", False),
    ("N_minus", {"nu": 4}, 3, "ideal", False),
    ("N_minus", {"nu": 4}, 3, "chart", False),
)


def _degeneracy():
    checks = []
    for name, params, bound, method, want in DEGENERACY_CASES:
        def run(name=name, params=params, bound=bound, method=method, want=want):
            res = holomorphic_degeneracy_search(cat.make_hypersurface(name, **params), bound, method)
            return res.degenerate == want, {"dimension": res.dimension,
                                            "fields": [str(X) for X in res.fields[:3]]}
        label = name + "".join(f"[{k}={v}]" for k, v in params.items())
        checks.append((f"{label} bound {bound} {method}: {'nonempty' if want else 'empty'}", run))
    return checks


# -- stabilizers --------------------------------------------------------------------

def _stabilizers():
    checks = []
    for gamma in (1, -1):
        def run(gamma=gamma):
            comps = graded_stabilizer(cat.make_hypersurface("S", gamma=gamma), -3, 5)
            dims = [c.dimension for c in comps]
            basis = [X for c in comps for X in c.basis]
            span = same_real_span(basis, cat.make_algebra("A1").fields)
            closed = bracket_closure_check(comps)
            ok = dims == [1, 1, 2, 1, 0, 0, 0, 0, 0] and span and closed and vanishing_certified(comps)
            return ok, {"dims": dims, "span_is_A1": span, "closed": closed}
        checks.append((f"S[gamma={gamma}] graded stabilizer", run))

    def quadric():
        comps = graded_stabilizer(cat.make_hypersurface("quadric_indef"), -2, 2,
                                  weights={"z1": 1, "z2": 1, "z3": 2})
        dims = [c.dimension for c in comps]
        return sum(dims) == 15 and bracket_closure_check(comps), {"dims": dims, "total": sum(dims)}
    checks.append(("indefinite quadric stabilizer has dimension 15", quadric))

    def hyperplane():
        comps = graded_stabilizer(cat.make_hypersurface("hyperplane"), -2, 2)
        dims = [c.dimension for c in comps]
        return sum(dims) > 5, {"dims": dims, "total": sum(dims)}
    checks.append(("hyperplane stabilizer exceeds 5", hyperplane))

    def truncated():
        comps = graded_stabilizer(cat.make_hypersurface("S", gamma=1), -3, 5)
        kept = [c for c in comps if c.weight != -3]
        return not bracket_closure_check(kept), "closure fails without weight -3"
    checks.append(("dropping a component breaks closure", truncated))
    return checks


# -- flows --------------------------------------------------------------------------

FLOW_T, FLOW_H, FLOW_STARTS, FLOW_SEED = 1.0, 1e-3, 20, 2024


def flow_convergence(X: HoloVField, starts, T=FLOW_T, h=FLOW_H) -> dict:
    d1 = batch_ratio_drift(X, starts, T, h)
    d2 = batch_ratio_drift(X, starts, T, h / 2)
    m1, m2 = float(d1.max()), float(d2.max())
    return {"drift": m1, "drift_half": m2, "ratio": (m1 / m2) if m2 > 0 else None,
            "rk4_exact": rk4_exact(X)}


def _flows():
    checks = []
    starts = random_starts(FLOW_STARTS, seed=FLOW_SEED, min_abs_P=0.1)
    for lab, X in zip(cat.LABELS, cat.make_algebra("g").fields):
        def run(X=X):
            r = flow_convergence(X, starts)
            ok = r["drift"] <= 1e-9
            if not r["rk4_exact"]:
                ok = ok and r["ratio"] is not None and 12 <= r["ratio"] <= 20
            return ok, r
        checks.append((f"flow of {lab} conserves Q^2/|P|^3", run))

    def classes():
        bad = []
        for lab, X in zip(cat.LABELS, cat.make_algebra("g").fields):
            ends = integrate_batch(X, starts, FLOW_T, FLOW_H)
            for a, b in zip(starts, ends):
                ca, cb = classify_point(tuple(a)), classify_point(tuple(b))
                if not ca.same_orbit(cb):
                    bad.append(lab)
                    break
        return not bad, "orbit class constant" if not bad else {"changed": bad}
    checks.append(("orbit class constant along flows", classes))

    def tube_cubic():
        worst = 0.0
        for X in cat.make_algebra("g_tilde").fields:
            for t in (-0.7, 0.2, 0.9):
                tr = integrate_flow(X, (0.3, t, -0.1, t * t, 0.5, t ** 3), 1.0, FLOW_H)
                s = tr.states
                worst = max(worst, float(np.max(np.abs(s[:, 3] - s[:, 1] ** 2))),
                            float(np.max(np.abs(s[:, 5] - s[:, 1] ** 3))))
        return worst < 1e-9, {"max_residual": worst}
    checks.append(("g_tilde flows stay on the tube cubic", tube_cubic))
    return checks


SUITES: dict = {
    "brackets": _brackets,
    "tangency": _tangency,
    "invariants": _invariants,
    "equivalences": _equivalences,
    "levi": _levi,
    "rank": _rank,
    "degeneracy": _degeneracy,
    "stabilizers": _stabilizers,
    "flows": _flows,
}
SUITE_NAMES = tuple(SUITES)


def run_suite(name: str, only: Iterable[str] | None = None) -> SuiteReport:
    """Run one suite; ``only`` restricts to checks whose name contains one of the strings.

    An empty ``only`` selects nothing and yields an empty, passing report.
    """
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    checks = SUITES[name]()
    if only is not None:
        keys = list(only)
        checks = [(n, f) for n, f in checks if any(k in n for k in keys)]
    report = SuiteReport(name)
    for label, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure with its message as witness
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        report.checks.append(Check(label, bool(ok), detail))
    return report


def run_all(names: Iterable[str] | None = None) -> list[SuiteReport]:
    return [run_suite(n) for n in (names or SUITE_NAMES)]
