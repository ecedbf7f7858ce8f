from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from crmodel.catalog import P_INVARIANT, Q_INVARIANT, make_map
from crmodel.poly import PARAM, STANDARD, NotDivisible, Poly, TableMismatch, VarTable, const, var
from crmodel.scalar import I, ExactScalar
from oracles import poly_to_sympy

y1, y2, y3 = var("y1"), var("y2"), var("y3")
z, w2, w3 = var("z"), var("w2"), var("w3")


def test_binomial_square():
    b = y2 - y1 ** 2
    assert b * b == y2 ** 2 - (y1 ** 2 * y2).scale(2) + y1 ** 4


def test_sextic_combination_matches_sympy():
    A = y3 - (y1 * y2).scale(3) + (y1 ** 3).scale(2)
    B = y2 - y1 ** 2
    f = A ** 2 + B ** 3 * const(4)
    s1, s2, s3 = sp.symbols("y1 y2 y3")
    oracle = sp.expand((s3 - 3 * s1 * s2 + 2 * s1 ** 3) ** 2 + 4 * (s2 - s1 ** 2) ** 3)
    assert sp.expand(poly_to_sympy(f) - oracle) == 0
    # the cubic term in y2 carries a plus sign
    assert oracle.coeff(s2, 3) == 4


def test_additive_identity():
    f = y1 * y2 + const(3)
    assert f + Poly.zero(STANDARD) == f


def test_table_mismatch():
    other = VarTable.build({"a": 1})
    with pytest.raises(TableMismatch):
        Poly.var(other, "a") + y1


def test_diff_examples():
    assert (w2.scale(4) + (z ** 2).scale(2 * I)).diff("w2") == const(4)
    assert const(7).diff("z").is_zero()
    z1, z2 = var("z1"), var("z2")
    assert (z1 ** 2 * z2).diff("z1") == (z1 * z2).scale(2)


def test_diff_unknown_variable():
    with pytest.raises(KeyError):
        y1.diff("nope")


def test_relative_invariance_by_substitution():
    act = make_map("full_action")
    lam = var("lam")
    assert act.pull_real(P_INVARIANT) == lam ** 2 * P_INVARIANT
    assert act.pull_real(Q_INVARIANT) == lam ** 3 * Q_INVARIANT


def test_identity_substitution():
    f = y1 * y3 - y2 ** 2 + const(2)
    assert f.substitute({"y1": y1, "y2": y2, "y3": y3}) == f


def test_cone_substitution():
    t = VarTable.build({}, params=("y1", "y2", "y3", "u1", "u2", "u3"))
    v = {n: Poly.var(t, n) for n in ("y1", "y2", "y3", "u1", "u2", "u3")}
    f = v["y1"] * v["y3"] - v["y2"] ** 2
    g = f.substitute({"y1": v["u3"] + v["u1"], "y3": v["u3"] - v["u1"], "y2": v["u2"]})
    assert g == v["u3"] ** 2 - v["u1"] ** 2 - v["u2"] ** 2


def test_conjugation_examples():
    zb, w2b = var("zbar"), var("w2bar")
    assert (z * w2b).conjugate() == zb * w2
    P = (w2 - w2b).scale(-I / 2) - z * zb
    assert P.conjugate() == P
    assert (z.scale(I)).conjugate() == zb.scale(-I)


def test_divide_examples():
    assert (y2 ** 2 - y1 ** 4).divide_exact(y2 - y1 ** 2) == y2 + y1 ** 2
    f = y1 * y3 + const(5)
    assert f.divide_exact(const(1)) == f
    with pytest.raises(NotDivisible):
        (y1 + y2).divide_exact(y1)
    with pytest.raises(ZeroDivisionError):
        f.divide_exact(Poly.zero(STANDARD))


def test_weights():
    assert Q_INVARIANT.weight_interval() == (3, 3)
    assert (z ** 2 * var("zbar")).weight_interval() == (3, 3)
    assert (w2 + z).weight_interval() == (1, 2)
    assert Poly.zero(STANDARD).weight_interval() is None


def test_canonical_text():
    f = (z ** 2).scale(2 * I) + w2.scale(4) - var("zbar") * z
    assert str(f) == "2*i*z^2 - z*conj(z) + 4*w2"


# -- properties --------------------------------------------------------------------

SMALL = VarTable.build({}, params=("a", "b", "c"))
coef = st.integers(min_value=-3, max_value=3)
expo = st.tuples(*[st.integers(min_value=0, max_value=2)] * 3)


@st.composite
def polys(draw, max_terms=4):
    terms = draw(st.dictionaries(expo, coef, max_size=max_terms))
    p = Poly.zero(SMALL)
    for e, c in terms.items():
        p = p + Poly.monomial(SMALL, dict(zip("abc", e)), c)
    return p


@given(polys(), polys(), polys())
def test_ring_laws(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f


@given(polys(), polys())
def test_division_recovers_factor(f, g):
    if g.is_zero():
        return
    assert (f * g).divide_exact(g) == f


@given(polys())
def test_conjugate_involution(f):
    assert f.conjugate().conjugate() == f


@settings(max_examples=40)
@given(polys(3), polys(2), polys(2), polys(2), polys(2), polys(2), polys(2))
def test_substitution_composes(f, g1, g2, g3, h1, h2, h3):
    G = {"a": g1, "b": g2, "c": g3}
    H = {"a": h1, "b": h2, "c": h3}
    composed = {k: v.substitute(H) for k, v in G.items()}
    assert f.substitute(G).substitute(H) == f.substitute(composed)


@settings(max_examples=30)
@given(polys(), polys())
def test_product_matches_sympy(f, g):
    assert sp.expand(poly_to_sympy(f * g) - poly_to_sympy(f) * poly_to_sympy(g)) == 0
