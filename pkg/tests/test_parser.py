import pytest

from crmodel import catalog as cat
from crmodel.lie import HolomorphyError, realify
from crmodel.parser import ParseError, parse_field, parse_map, parse_poly, parse_scalar, session_table
from crmodel.poly import STANDARD, Poly
from crmodel.scalar import I, SQRT2, ExactScalar

v = cat.v


def test_precedence():
    assert parse_poly("-z^2") == -(v("z") ** 2)
    assert parse_poly("2*z^2 + 3") == (v("z") ** 2).scale(2) + Poly.const(STANDARD, 3)
    assert parse_poly("(z + 1)^2") == (v("z") + Poly.const(STANDARD, 1)) ** 2
    assert parse_poly("z/2") == v("z").scale(ExactScalar(1) / 2)


def test_re_im_conj():
    assert realify(parse_poly("Re(z1)"), cat.TUBE) == v("x1")
    assert realify(parse_poly("Im(z1^2)"), cat.TUBE) == (v("x1") * v("y1")).scale(2)
    assert parse_poly("Re(x1 + i*y1)") == v("x1")
    assert parse_poly("conj(z)") == v("zbar")


def test_scalars():
    assert parse_scalar("1/2*sqrt2*i") == SQRT2 * I / 2
    with pytest.raises(ParseError):
        parse_scalar("z")


@pytest.mark.parametrize("text,pos", [("2z", 1), ("z^^2", 2), ("z^2^3", 3), ("z/z", 1),
                                      ("z +", 3), ("foo", 0), ("z $ 1", 2), ("z^1.5", 2)])
def test_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_poly(text)
    assert exc.value.pos == pos


def test_division_by_zero():
    with pytest.raises(ParseError):
        parse_poly("z/0")


def test_fields():
    X = parse_field("d/dz + 2*i*z*d/dw2 + (2*i*z^2 + 4*w2)*d/dw3")
    assert X == cat.make_algebra("g").field("X1")
    assert parse_field("z1*d/dz1").coords == cat.TUBE
    with pytest.raises(HolomorphyError):
        parse_field("zbar*d/dz")
    with pytest.raises(ParseError):
        parse_field("d/dz*d/dz")
    with pytest.raises(ParseError):
        parse_field("d/dz + d/dz1")
    with pytest.raises(ParseError):
        parse_field("d/dx1")


@pytest.mark.parametrize("alg", ["g", "g_tilde", "A1", "A0", "B"])
def test_field_round_trip(alg):
    for X in cat.make_algebra(alg).fields:
        assert parse_field(str(X), coords=X.coords) == X


@pytest.mark.parametrize("name", cat.HYPERSURFACE_NAMES)
def test_polynomial_round_trip(name):
    for rho in cat.make_hypersurface(name).rhos:
        assert parse_poly(str(rho)) == rho


def test_map_parsing_and_round_trip():
    F = parse_map("w2 = z2 + i*z1^2; z = z1; w3 = z3", cat.TUBE, cat.AMBIENT,
                  inverse="z, w2 - i*z^2, w3")
    assert F.verified
    assert F.forward[1] == v("z2") + v("z1") ** 2 * Poly.const(STANDARD, I)
    G = cat.make_map("tube_to_ambient")
    again = parse_map(", ".join(str(p) for p in G.forward), G.src, G.dst)
    assert again.forward == G.forward
    with pytest.raises(ParseError):
        parse_map("z1, z2", cat.TUBE, cat.AMBIENT)
    with pytest.raises(ParseError):
        parse_map("z, z2, z3", cat.TUBE, cat.AMBIENT)


def test_session_table_restricts_and_extends():
    table, allowed = session_table(["z", "w2", "w3"])
    assert parse_poly("z*zbar", table, allowed)
    with pytest.raises(ParseError):
        parse_poly("z1", table, allowed)
    table, allowed = session_table(["z", "kappa"])
    p = parse_poly("kappa*z", table, allowed)
    assert "kappa" in p.variables()
    table, _ = session_table(weights={"z1": 1, "z2": 1, "z3": 2})
    assert table.weight("z3") == 2
