from fractions import Fraction

import pytest

from crmodel import catalog as cat
from crmodel.cr import (
    Chart, Hypersurface, SurfaceError, chart_pullback, clearing_power, field_rank_at,
    hermitian_signature, holomorphic_degeneracy_search, levi_at, orbit_preserved,
    relative_invariant_check, tangency_chart, tangency_divisibility,
)
from crmodel.lie import HoloVField
from crmodel.poly import Poly
from crmodel.scalar import I, ExactScalar
from crmodel.suites import DEGENERACY_CASES, LEVI_CASES, cubic_points, levi_class, off_cubic_points

T = cat.T
v = cat.v


def parabolic_cylinder():
    return Hypersurface("parabolic", [v("y2") - v("y1") ** 2],
                        chart=Chart({"y2": v("y1") ** 2}))


def field(coords, **parts):
    return HoloVField.from_dict(T, coords, {k: Poly.const(T, c) for k, c in parts.items()})


def test_translation_along_real_direction_is_tangent():
    M = parabolic_cylinder()
    X = field(cat.TUBE, z1=1)
    assert tangency_chart(X, M) and tangency_divisibility(X, M)


def test_imaginary_translation_is_not_tangent():
    M = parabolic_cylinder()
    X = field(cat.TUBE, z1=I)
    assert not tangency_chart(X, M)
    assert not tangency_divisibility(X, M)


@pytest.mark.parametrize("alg,surface", [("g", "cubic_C"), ("g_tilde", "tube_cubic"),
                                         ("A1", "S"), ("A0", "Q"), ("B", "Pi")])
def test_catalog_tangency_both_routes_agree(alg, surface):
    M = cat.make_hypersurface(surface)
    for X in cat.make_algebra(alg).fields:
        a = tangency_chart(X, M)
        assert a
        if M.codim == 1:
            assert tangency_divisibility(X, M) == a


def test_wrong_field_rejected_on_cubic():
    M = cat.make_hypersurface("cubic_C")
    assert not tangency_chart(field(cat.AMBIENT, w2=I), M)
    assert not tangency_chart(field(cat.AMBIENT, z=I), M)


def test_chart_pullback_common_power():
    chart = Chart({"y3": v("y1") * v("y2")}, v("x1"))
    f, g = v("y3"), v("y3") ** 2 + v("y2")
    m = clearing_power([f, g], chart)
    assert m == 2
    assert chart_pullback(f, chart, m) == v("x1") * v("y1") * v("y2")
    assert chart_pullback(g, chart, m) == (v("y1") * v("y2")) ** 2 + v("x1") ** 2 * v("y2")
    with pytest.raises(ValueError):
        chart_pullback(g, chart, 1)


def test_surface_validation():
    with pytest.raises(SurfaceError):
        Hypersurface("bad", [v("y2") - v("y1") ** 2], chart=Chart({"y2": v("y1")}))
    with pytest.raises(SurfaceError):
        Hypersurface("complex", [v("z1")])


def test_relative_invariants():
    action = cat.make_map("full_action")
    assert relative_invariant_check(cat.P_INVARIANT, action, 2)
    assert relative_invariant_check(cat.Q_INVARIANT, action, 3)
    assert not relative_invariant_check(cat.P_INVARIANT, action, 3)


def test_orbit_preserved_families():
    for fam in cat.GROUP_FAMILIES["B"]:
        assert orbit_preserved(cat.make_hypersurface("Pi"), cat.make_map(fam))


def test_hermitian_signature():
    one, zero = ExactScalar(1), ExactScalar(0)
    assert hermitian_signature(((one, zero), (zero, one))) == (2, 0, 0)
    assert hermitian_signature(((-one, zero), (zero, -one))) == (0, 2, 0)
    assert hermitian_signature(((one, zero), (zero, -one))) == (1, 1, 0)
    assert hermitian_signature(((zero, I), (-I, zero))) == (1, 1, 0)
    assert hermitian_signature(((one, zero), (zero, zero))) == (1, 0, 1)
    with pytest.raises(ValueError):
        hermitian_signature(((one, I), (I, one)))


@pytest.mark.parametrize("name,params,pt,want", LEVI_CASES)
def test_levi_cases(name, params, pt, want):
    rep = levi_at(cat.make_hypersurface(name, **params), pt)
    assert levi_class(rep.signature) == want
    assert rep.orientation.startswith("d rho/d ")


def test_levi_quadric_signature_and_json():
    rep = levi_at(cat.make_hypersurface("quadric_indef"), (0,) * 6)
    assert rep.signature == (1, 1, 0)
    assert rep.to_json()["signature"] == [1, 1, 0]


def test_levi_off_surface_raises():
    with pytest.raises(SurfaceError):
        levi_at(cat.make_hypersurface("quadric_indef"), (0, 0, 0, 0, 0, 1))


def test_ranks():
    g = cat.make_algebra("g").fields
    assert {field_rank_at(g, p) for p in cubic_points()} == {4}
    assert {field_rank_at(g, p) for p in off_cubic_points()} == {5}
    assert field_rank_at(g, (0,) * 6) == 4
    assert field_rank_at(g, (0, 0, 0, 1, 0, 0)) == 5


@pytest.mark.parametrize("name,params,bound,method,want", DEGENERACY_CASES)
def test_degeneracy(name, params, bound, method, want):
    res = holomorphic_degeneracy_search(cat.make_hypersurface(name, **params), bound, method)
    assert res.degenerate == want


def test_degeneracy_witness_lies_in_complex_tangent():
    M = cat.make_hypersurface("Pi", delta=2)
    res = holomorphic_degeneracy_search(M, 1, "chart")
    for X in res.fields:
        for c in (ExactScalar(1), I):
            assert tangency_chart(X.scale(c), M)


def test_degeneracy_requires_specialized_surface():
    with pytest.raises(SurfaceError):
        holomorphic_degeneracy_search(cat.make_hypersurface("Pi"), 1)


def test_contains_exact_points():
    C = cat.make_hypersurface("cubic_C")
    assert all(C.contains(p) for p in cubic_points(5))
    assert not C.contains((Fraction(1), 0, 0, 0, 0, 0))
