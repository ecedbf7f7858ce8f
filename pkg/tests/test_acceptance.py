"""Acceptance criteria, one marked group per criterion.

Each test carries ``@pytest.mark.criterion(n, title)``; the terminal summary
prints one PASS/FAIL line per criterion.  Criteria are asserted as worded.
"""

import time

import pytest

from crmodel import catalog as cat
from crmodel.cr import (
    chart_pullback, field_rank_at, holomorphic_degeneracy_search, levi_at,
    relative_invariant_check, tangency_chart, tangency_divisibility,
)
from crmodel.flows import batch_ratio_drift, random_starts
from crmodel.lie import bracket, proportionality, pushforward, same_real_span, verify_structure
from crmodel.scalar import I, SQRT2, ExactScalar, format_scalar
from crmodel.stabilizer import bracket_closure_check, graded_stabilizer
from crmodel.suites import cubic_points, levi_class, off_cubic_points

crit = pytest.mark.criterion


# 1 ------------------------------------------------------------------------------

ALGEBRAS = [("g", {}), ("g_tilde", {}), ("A", {"s": I}), ("A", {"s": 0}), ("A", {"s": 1}),
            ("A0", {}), ("A1", {}), ("B", {})]


@crit(1, "closure, Jacobi and structure with only the recorded rescalings")
@pytest.mark.parametrize("name,kw", ALGEBRAS, ids=lambda x: str(x))
def test_c1_structure(name, kw):
    alg = cat.make_algebra(name, **kw)
    rep = verify_structure(alg.fields, cat.abstract_table(), alg.rescaling)
    assert rep.ok, rep.to_json()
    assert not rep.deviations
    F = alg.fields
    for a in F:
        for b in F:
            for c in F:
                jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
                assert jac.is_zero()


# 2 ------------------------------------------------------------------------------

@crit(2, "P and Q are relative invariants of weights 2 and 3")
def test_c2_relative_invariance():
    action = cat.make_map("full_action")
    assert relative_invariant_check(cat.P_INVARIANT, action, 2)
    assert relative_invariant_check(cat.Q_INVARIANT, action, 3)


# 3 ------------------------------------------------------------------------------

TANGENCY = [
    ("g", "cubic_C"), ("g_tilde", "tube_cubic"), ("g_tilde", "N_minus"), ("g_tilde", "N_plus"),
    ("A1", "S"), ("A0", "Q"), ("B", "Pi"),
]


@crit(3, "catalog fields are tangent to their orbits, formal parameters kept")
@pytest.mark.parametrize("alg,surface", TANGENCY)
def test_c3_tangency(alg, surface):
    M = cat.make_hypersurface(surface)
    for X in cat.make_algebra(alg).fields:
        if M.chart is not None:
            assert tangency_chart(X, M), (str(X), surface)
        if M.codim == 1:
            assert tangency_divisibility(X, M), (str(X), surface)


# 4 ------------------------------------------------------------------------------

@crit(4, "the tube map pushes the g_tilde basis onto the g basis")
def test_c4_tube_map():
    F = cat.make_map("tube_to_ambient")
    assert F.verified
    assert F.forward[0] == cat.v("z1").scale(-I / SQRT2)
    g, gt = cat.make_algebra("g"), cat.make_algebra("g_tilde")
    pushed = {lab: pushforward(F, gt.field(lab)) for lab in cat.LABELS}
    assert same_real_span(list(pushed.values()), g.fields)
    factors = {lab: format_scalar(proportionality(pushed[lab], g.field(lab))) for lab in cat.LABELS}
    mismatched = [lab for lab in cat.LABELS if pushed[lab] != g.field(lab)]
    assert not mismatched, f"pushed basis equals the g basis only up to the factors {factors}"


# 5 ------------------------------------------------------------------------------

def _factor(rho, target):
    """c with rho == c * target, from the leading coefficient."""
    e = max(target.terms)
    c = rho.terms.get(e)
    if c is None:
        return None
    c = c / target.terms[e]
    return c if rho == target.scale(c) else None


@crit(5, "equivalence maps verify exactly")
def test_c5_chain_to_hermitian_quadric():
    F = cat.make_map("orbit_to_quadric")
    got = F.pull_real(cat.make_hypersurface("quadric_hermitian").rho)
    assert _factor(got, cat.make_hypersurface("orbit_Q_zero").rho) == ExactScalar(1)


@crit(5, "equivalence maps verify exactly")
def test_c5_qbeta_to_indefinite_quadric():
    F = cat.make_map("qbeta_to_quadric")
    assert "beta" in cat.make_hypersurface("Q").params
    got = F.pull_real(cat.make_hypersurface("quadric_indef").rho)
    c = _factor(got, cat.make_hypersurface("Q").rho)
    assert c is not None and c.is_rational() and not c.is_zero()


@crit(5, "equivalence maps verify exactly")
def test_c5_cone():
    F = cat.make_map("s0_to_cone")
    got = F.pull_real(cat.make_hypersurface("light_cone_tube").rho)
    assert got == cat.make_hypersurface("S", gamma=0).rho


@crit(5, "equivalence maps verify exactly")
def test_c5_flip_preserves_cubic():
    F = cat.make_map("flip")
    C = cat.make_hypersurface("cubic_C")
    assert F.verified
    for rho in C.rhos:
        assert chart_pullback(F.pull_real(rho), C.chart).is_zero()


# 6 ------------------------------------------------------------------------------

@crit(6, "quartic identity for N_minus at nu = 4")
def test_c6_quartic_identity():
    y1, y2, y3 = cat.v("y1"), cat.v("y2"), cat.v("y3")
    lhs = (y3 - (y1 * y2).scale(3) + (y1 ** 3).scale(2)) ** 2 + ((y2 - y1 ** 2) ** 3).scale(4)
    rhs = (y3 ** 2 - (y1 ** 2 * y2 ** 2).scale(3) - (y1 * y2 * y3).scale(6)
           + (y1 ** 3 * y3).scale(4) - (y2 ** 3).scale(4))
    assert lhs == rhs, f"expansion is {lhs}"


# 7 ------------------------------------------------------------------------------

@crit(7, "graded stabilizer dimensions")
@pytest.mark.parametrize("gamma", [1, -1])
def test_c7_s_gamma(gamma):
    comps = graded_stabilizer(cat.make_hypersurface("S", gamma=gamma), -3, 5)
    assert [c.dimension for c in comps] == [1, 1, 2, 1, 0, 0, 0, 0, 0]
    assert same_real_span([X for c in comps for X in c.basis], cat.make_algebra("A1").fields)


@crit(7, "graded stabilizer dimensions")
def test_c7_quadric():
    comps = graded_stabilizer(cat.make_hypersurface("quadric_indef"), -2, 2,
                              weights={"z1": 1, "z2": 1, "z3": 2})
    assert sum(c.dimension for c in comps) == 15
    assert bracket_closure_check(comps)


@crit(7, "graded stabilizer dimensions")
def test_c7_hyperplane():
    comps = graded_stabilizer(cat.make_hypersurface("hyperplane"), -2, 2)
    assert sum(c.dimension for c in comps) > 5


# 8 ------------------------------------------------------------------------------

LEVI = [
    ("quadric_indef", {}, (0, 0, 0, 0, 0, 0), "indefinite"),
    ("S", {"gamma": 1}, (0, 1, 0, 1, 0, 2), "definite"),
    ("S", {"gamma": -1}, (0, 1, 0, 1, 0, 0), "indefinite"),
    ("Pi", {"delta": 2}, (0, 1, 0, 2, 0, 0), "flat"),
] + [("N_minus", {"nu": nu}, (0, 0, 0, -nu, 0, nu * nu), want)
     for nu, want in ((1, "indefinite"), (2, "indefinite"), (3, "indefinite"), (4, "rank1"),
                      (5, "definite"), (8, "definite"))]


@crit(8, "Levi signatures at exact points")
@pytest.mark.parametrize("name,params,pt,want", LEVI)
def test_c8_levi(name, params, pt, want):
    M = cat.make_hypersurface(name, **params)
    assert M.contains(pt)
    rep = levi_at(M, pt)
    assert levi_class(rep.signature) == want, rep.to_json()
    assert rep.orientation
    if name == "quadric_indef":
        assert rep.signature == (1, 1, 0)
    if want == "flat":
        assert rep.rank == 0


# 9 ------------------------------------------------------------------------------

@crit(9, "rank 4 on the cubic and 5 off it")
def test_c9_rank():
    g = cat.make_algebra("g").fields
    C = cat.make_hypersurface("cubic_C")
    on, off = cubic_points(12), off_cubic_points(12)
    assert len(on) >= 10 and len(off) >= 10
    assert all(C.contains(p) for p in on) and not any(C.contains(p) for p in off)
    assert [field_rank_at(g, p) for p in on] == [4] * len(on)
    assert [field_rank_at(g, p) for p in off] == [5] * len(off)


# 10 -----------------------------------------------------------------------------

@crit(10, "flow conservation with fourth-order convergence")
def test_c10_flows():
    t0 = time.perf_counter()
    starts = random_starts(20, seed=2024, min_abs_P=0.1)
    report, bad = {}, []
    for lab, X in zip(cat.LABELS, cat.make_algebra("g").fields):
        d1 = float(batch_ratio_drift(X, starts, 1.0, 1e-3).max())
        d2 = float(batch_ratio_drift(X, starts, 1.0, 5e-4).max())
        ratio = d1 / d2 if d2 > 0 else None
        report[lab] = (d1, d2, ratio)
        assert d1 <= 1e-9, (lab, d1)
        if ratio is None or not 12 <= ratio <= 20:
            bad.append(lab)
    elapsed = time.perf_counter() - t0
    assert elapsed <= 10, elapsed
    assert not bad, f"halving h does not reduce the drift 12-20x for {bad}: {report}"


# 11 -----------------------------------------------------------------------------

DEGEN = [("Pi", {"delta": 2}, 1, True), ("sphere_cylinder", {}, 1, True),
         ("quadric_indef", {}, 2, False), ("N_minus", {"nu": 4}, 3, False)]


@crit(11, "holomorphic degeneracy search")
@pytest.mark.parametrize("name,params,bound,want", DEGEN)
def test_c11_degeneracy(name, params, bound, want):
    res = holomorphic_degeneracy_search(cat.make_hypersurface(name, **params), bound)
    assert res.degenerate == want, res.to_json()
