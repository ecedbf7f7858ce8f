"""Named algebras, hypersurfaces, maps and group families of the cubic model.

Every constructor validates its payload: algebras close under brackets,
charts parametrize their surfaces, maps carry a verified inverse.  Parameters
passed as ``None`` stay formal (polynomial variables).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .cr import Chart, Hypersurface
from .lie import HoloVField, PolyMap, StructureTable, closure_table
from .poly import STANDARD, Poly
from .scalar import I, ONE, SQRT2, ExactScalar, format_scalar

__all__ = [
    "LABELS", "AMBIENT", "TUBE", "abstract_table", "Algebra", "make_algebra",
    "make_hypersurface", "make_map", "CatalogEntry", "ENTRIES", "manifest",
    "P_INVARIANT", "Q_INVARIANT", "ALGEBRA_NAMES", "HYPERSURFACE_NAMES", "MAP_NAMES",
    "CatalogError", "GROUP_FAMILIES", "RESCALINGS",
]

T = STANDARD
AMBIENT = ("z", "w2", "w3")
TUBE = ("z1", "z2", "z3")
LABELS = ("X3", "X2", "X1", "X1'", "X0")


class CatalogError(KeyError):
    pass


def v(name: str) -> Poly:
    return Poly.var(T, name)


def c(x) -> Poly:
    return Poly.const(T, x)


def q(a, b=1) -> ExactScalar:
    return ExactScalar(Fraction(a, b))


def _param(value, name: str) -> Poly:
    """Formal variable when ``value`` is None, else the constant."""
    if value is None:
        return v(name)
    if isinstance(value, Poly):
        return value
    return c(ExactScalar.coerce(value))


def _is_formal(value) -> bool:
    return value is None


x1, y1, x2, y2, x3, y3 = (v(n) for n in ("x1", "y1", "x2", "y2", "x3", "y3"))


def abstract_table() -> StructureTable:
    """The bracket relations shared by all realizations of the model algebra."""
    return StructureTable(LABELS, {
        ("X3", "X0"): {"X3": 3},
        ("X2", "X1"): {"X3": 2},
        ("X2", "X0"): {"X2": 2},
        ("X1", "X1'"): {"X2": 4},
        ("X1", "X0"): {"X1": 1},
        ("X1'", "X0"): {"X1'": 1},
    })


# -- algebras ----------------------------------------------------------------------

@dataclass
class Algebra:
    name: str
    fields: list
    labels: tuple
    rescaling: tuple
    provenance: str

    @property
    def coords(self):
        return self.fields[0].coords

    def field(self, label: str) -> HoloVField:
        try:
            return self.fields[self.labels.index(label)]
        except ValueError:
            raise CatalogError(f"{self.name} has no field {label!r}") from None

    def table(self) -> StructureTable:
        return closure_table(self.fields, self.labels)


def _vf(coords, a, b, cc) -> HoloVField:
    return HoloVField(T, coords, [p if isinstance(p, Poly) else c(p) for p in (a, b, cc)])


def _euler(coords, w=(1, 2, 3)) -> HoloVField:
    return _vf(coords, *(v(n).scale(k) for n, k in zip(coords, w)))


def _g():
    z, w2, w3 = v("z"), v("w2"), v("w3")
    return [
        _vf(AMBIENT, 0, 0, 1),
        _vf(AMBIENT, 0, 1, 0),
        _vf(AMBIENT, 1, (z * I).scale(2), w2.scale(4) + (z ** 2).scale(2 * I)),
        _vf(AMBIENT, I, z.scale(2), (z ** 2).scale(2)),
        _euler(AMBIENT),
    ]


def _g_tilde():
    z1, z2 = v("z1"), v("z2")
    return [
        _vf(TUBE, 0, 0, 1),
        _vf(TUBE, 0, 1, 0),
        _vf(TUBE, I, z1.scale(2), z2.scale(3)),
        _vf(TUBE, 1, 0, 0),
        _euler(TUBE),
    ]


def _a_family(s, n):
    z1, z2 = v("z1"), v("z2")
    return [
        _vf(TUBE, 0, 0, 1),
        _vf(TUBE, 0, 1, 0),
        _vf(TUBE, 1, 0, z2.scale(2)),
        _vf(TUBE, s, z1.scale(4), (z1 ** 2).scale(4) + n),
        _euler(TUBE),
    ]


def _a1():
    z1, z2 = v("z1"), v("z2")
    return [
        _vf(TUBE, 0, 0, 1),
        _vf(TUBE, 0, 1, 0),
        _vf(TUBE, 1, z1, z2.scale(2)),
        _vf(TUBE, 1, 0, 0),
        _euler(TUBE),
    ]


def _a0():
    z1, z2 = v("z1"), v("z2")
    return [
        _vf(TUBE, 0, 0, 1),
        _vf(TUBE, 0, 1, 0),
        _vf(TUBE, 1, 0, z2.scale(2)),
        _vf(TUBE, 0, z1, z1 ** 2),
        _euler(TUBE),
    ]


def _b():
    z1, z2 = v("z1"), v("z2")
    return [
        _vf(TUBE, 0, 0, 1),
        _vf(TUBE, 0, 0, z2),
        _vf(TUBE, 0, 1, z1 * z2),
        _vf(TUBE, 1, 0, 0),
        _euler(TUBE, (1, 1, 3)),
    ]


# Diagonal factors d with d_i * X_i satisfying the abstract relations.
# They were found by comparing closure tables with the abstract table.
RESCALINGS = {
    "g": (2, 1, 1, 1, 1),
    "g_tilde": (q(3, 2), 1, 1, -2, 1),
    "A": (1, 1, 1, 1, 1),
    "A1": (1, 1, 1, -4, 1),
    "A0": (1, 1, 1, 4, 1),
    "B": (q(-1, 2), 1, 1, -4, 1),
}

ALGEBRA_NAMES = ("g", "g_tilde", "A", "A0", "A1", "B")


def make_algebra(name: str, s=None, n=0) -> Algebra:
    """Five-field basis ``(X3, X2, X1, X1', X0)`` of a named realization.

    ``A`` is the one-parameter family with ``X1' = s d/dz1 + 4 z1 d/dz2 +
    (4 z1^2 + n) d/dz3``; ``s=None`` keeps ``s`` formal.
    """
    if name == "g":
        fields, prov = _g(), "model algebra of the cubic, ambient coordinates (z, w2, w3)"
    elif name == "g_tilde":
        fields, prov = _g_tilde(), "tube realization of the model algebra"
    elif name == "A":
        fields = _a_family(_param(s, "s"), _param(n, "n"))
        prov = "one-parameter family of transitive realizations before normalization"
    elif name == "A1":
        fields, prov = _a1(), "normalized realization of type A1"
    elif name == "A0":
        fields, prov = _a0(), "normalized realization of type A0"
    elif name == "B":
        fields, prov = _b(), "realization of type B (degenerate case)"
    else:
        raise CatalogError(f"unknown algebra {name!r}")
    label = name
    if name == "A":
        label = f"A({'s' if s is None else format_scalar(ExactScalar.coerce(s))})"
        if n != 0:
            label += f"[n={'n' if n is None else format_scalar(ExactScalar.coerce(n))}]"
    alg = Algebra(label,
                  fields, LABELS, tuple(ExactScalar.coerce(x) for x in RESCALINGS[name]), prov)
    alg.table()  # closure self-check
    return alg


# -- relative invariants -----------------------------------------------------------

# P = Im w2 - |z|^2 and Q = Im w3 - 4 Re z Im w2 + 2 |z|^2 Re z in ambient reals
P_INVARIANT = y2 - x1 ** 2 - y1 ** 2
Q_INVARIANT = y3 - (x1 * y2).scale(4) + ((x1 ** 2 + y1 ** 2) * x1).scale(2)


# -- hypersurfaces -----------------------------------------------------------------

def _tube_A():
    A = y3 - (y1 * y2).scale(3) + (y1 ** 3).scale(2)
    B = y2 - y1 ** 2
    return A, B


def _surface(name, **kw) -> Hypersurface:
    if name == "cubic_C":
        r = x1 ** 2 + y1 ** 2
        return Hypersurface(
            "cubic_C", [y2 - r, y3 - (r * x1).scale(2)], AMBIENT,
            Chart({"y2": r, "y3": (r * x1).scale(2)}),
            note="Im w2 = |z|^2, Im w3 = 2 Re(z^2 conj z); four-parameter chart")
    if name == "tube_cubic":
        return Hypersurface(
            "tube_cubic", [y2 - y1 ** 2, y3 - y1 ** 3], TUBE,
            Chart({"y2": y1 ** 2, "y3": y1 ** 3}),
            note="tube over the twisted cubic (t, t^2, t^3)")
    if name in ("N_minus", "N_plus"):
        nu = kw.get("nu")
        A, B = _tube_A()
        sign = 1 if name == "N_minus" else -1
        rho = A ** 2 + (B ** 3 * _param(nu, "nu")).scale(sign)
        if not _is_formal(nu) and ExactScalar.coerce(nu) == 4 and name == "N_minus":
            u = v("u")
            chart = Chart({"y2": y1 ** 2 - u ** 2,
                           "y3": y1 ** 3 - (y1 * u ** 2).scale(3) + (u ** 3).scale(2)})
        else:
            chart = None
        return Hypersurface(
            name if _is_formal(nu) else f"{name}[nu={ExactScalar.coerce(nu)}]", [rho], TUBE, chart,
            ("y2 - y1^2 < 0",) if name == "N_minus" else ("y2 - y1^2 > 0",),
            ("nu",) if _is_formal(nu) else (),
            note="squared form (y3 - 3y1y2 + 2y1^3)^2 = %s nu (y2 - y1^2)^3" % ("-" if sign > 0 else "+"))
    if name == "N_zero":
        return Hypersurface("N_zero", [y2 - y1 ** 2], TUBE, Chart({"y2": y1 ** 2}),
                            ("y3 - y1^3 != 0",))
    if name == "S":
        gamma = kw.get("gamma")
        g = _param(gamma, "gamma")
        rho = y1 * y3 - g * y1 ** 4 - y2 ** 2
        return Hypersurface(
            "S" if _is_formal(gamma) else f"S[gamma={ExactScalar.coerce(gamma)}]", [rho], TUBE,
            Chart({"y3": g * y1 ** 4 + y2 ** 2}, y1), ("y1 != 0",),
            ("gamma",) if _is_formal(gamma) else (),
            note="y3 = gamma y1^3 + y2^2 / y1, multiplied by y1")
    if name == "Q":
        beta = kw.get("beta")
        b = _param(beta, "beta")
        rhs = b * y1 ** 3 + (y2 * x1).scale(2)
        return Hypersurface(
            "Q" if _is_formal(beta) else f"Q[beta={ExactScalar.coerce(beta)}]", [y3 - rhs], TUBE,
            Chart({"y3": rhs}), ("y1 != 0",), ("beta",) if _is_formal(beta) else ())
    if name == "Pi":
        delta = kw.get("delta")
        d = _param(delta, "delta")
        return Hypersurface(
            "Pi" if _is_formal(delta) else f"Pi[delta={ExactScalar.coerce(delta)}]",
            [y2 - d * y1], TUBE, Chart({"y2": d * y1}), ("y1*y2 != 0",),
            ("delta",) if _is_formal(delta) else ())
    if name == "quadric_indef":
        rhs = x1 ** 2 + y1 ** 2 - x2 ** 2 - y2 ** 2
        return Hypersurface("quadric_indef", [y3 - rhs], TUBE, Chart({"y3": rhs}),
                            note="Im z3 = |z1|^2 - |z2|^2")
    if name == "quadric_hermitian":
        rhs = (x1 * x2 + y1 * y2).scale(2)
        return Hypersurface("quadric_hermitian", [y3 - rhs], AMBIENT, Chart({"y3": rhs}),
                            note="Im w3 = 2 Re(z conj w2)")
    if name == "quadric_im":
        rhs = y1 * x2 - x1 * y2
        return Hypersurface("quadric_im", [y3 - rhs], TUBE, Chart({"y3": rhs}),
                            note="Im z3 = Im(z1 conj z2)")
    if name == "light_cone_tube":
        return Hypersurface("light_cone_tube", [y3 ** 2 - y1 ** 2 - y2 ** 2], TUBE,
                            constraints=("y3 > 0",))
    if name == "orbit_Q_zero":
        return Hypersurface("orbit_Q_zero", [Q_INVARIANT], AMBIENT,
                            Chart({"y3": (x1 * y2).scale(4) - ((x1 ** 2 + y1 ** 2) * x1).scale(2)}),
                            note="Q = 0, the union of the two orbits with mu = nu = 0 and the cubic")
    if name in ("M_plus", "M_minus"):
        mu = kw.get("mu")
        m = _param(mu, "mu")
        sign = -1 if name == "M_plus" else 1
        rho = Q_INVARIANT ** 2 + (m * P_INVARIANT ** 3).scale(sign)
        return Hypersurface(
            name if _is_formal(mu) else f"{name}[mu2={ExactScalar.coerce(mu)}]", [rho], AMBIENT,
            constraints=("P > 0",) if name == "M_plus" else ("P < 0",),
            params=("mu",) if _is_formal(mu) else (),
            note="Q^2 = mu2 (+-P)^3 in ambient coordinates; mu stands for the squared parameter")
    if name == "hyperplane":
        return Hypersurface("hyperplane", [y3], TUBE, Chart({"y3": c(0)}))
    if name == "sphere_cylinder":
        return Hypersurface("sphere_cylinder", [x1 ** 2 + y1 ** 2 + x2 ** 2 + y2 ** 2 - 1], TUBE,
                            note="|z1|^2 + |z2|^2 = 1, times C")
    raise CatalogError(f"unknown hypersurface {name!r}")


HYPERSURFACE_NAMES = (
    "cubic_C", "tube_cubic", "N_minus", "N_plus", "N_zero", "S", "Q", "Pi",
    "quadric_indef", "quadric_hermitian", "quadric_im", "light_cone_tube",
    "orbit_Q_zero", "M_plus", "M_minus", "hyperplane", "sphere_cylinder",
)


def make_hypersurface(name: str, **params) -> Hypersurface:
    return _surface(name, **params)


# -- maps --------------------------------------------------------------------------

def _pm(src, dst, fwd, inv, name) -> PolyMap:
    return PolyMap(T, src, dst, fwd, inv, name=name)


def _tube_to_ambient():
    z1, z2, z3 = v("z1"), v("z2"), v("z3")
    z, w2, w3 = v("z"), v("w2"), v("w3")
    alpha = -I / SQRT2
    beta = I / 2
    delta = q(2, 3) * SQRT2
    eps = SQRT2 / 6
    fwd = [z1.scale(alpha), z2 + (z1 ** 2).scale(beta), z3.scale(delta) + (z1 ** 3).scale(eps)]
    zz1 = z.scale(ONE / alpha)
    zz2 = w2 - (zz1 ** 2).scale(beta)
    zz3 = (w3 - (zz1 ** 3).scale(eps)).scale(ONE / delta)
    return _pm(TUBE, AMBIENT, fwd, [zz1, zz2, zz3], "tube_to_ambient")


def _maps(name, **kw) -> PolyMap:
    z, w2, w3 = v("z"), v("w2"), v("w3")
    z1, z2, z3 = v("z1"), v("z2"), v("z3")
    if name == "tube_to_ambient":
        return _tube_to_ambient()
    if name == "flip":
        return _pm(AMBIENT, AMBIENT, [-z, w2, -w3], [-z, w2, -w3], "flip")
    if name == "kill_pluriharmonic":
        return _pm(AMBIENT, AMBIENT, [z, w2, w3 - (z * w2).scale(2)],
                   [z, w2, w3 + (z * w2).scale(2)], "kill_pluriharmonic")
    if name == "w2_twist":
        return _pm(AMBIENT, AMBIENT, [z, w2.scale(-I) - z ** 2, w3],
                   [z, (w2 + z ** 2).scale(I), w3], "w2_twist")
    if name == "orbit_to_quadric":
        return _maps("kill_pluriharmonic").then(_maps("w2_twist"))
    if name == "hermitian_to_indef":
        h = q(1, 2)
        return _pm(AMBIENT, TUBE, [(z + w2).scale(h), (z - w2).scale(h), w3.scale(h)],
                   [z1 + z2, z1 - z2, z3.scale(2)], "hermitian_to_indef")
    if name == "qbeta_to_quadric":
        b = _param(kw.get("beta"), "beta")
        u2 = -(b * z1 ** 2).scale(q(3, 4)) - z2
        u3 = z3 + (b * z1 ** 3).scale(q(1, 4)) - z1 * z2
        h = q(1, 2)
        fwd = [(z1 - u2.scale(I)).scale(h), (z1 + u2.scale(I)).scale(h), -u3]
        # inverse: z1 = a + b, u2 = i (a - b), u3 = -c
        a_, b_, c_ = z1, z2, z3
        Z1 = a_ + b_
        U2 = (a_ - b_).scale(I)
        Z2 = -U2 - (b * Z1 ** 2).scale(q(3, 4))
        Z3 = -c_ - (b * Z1 ** 3).scale(q(1, 4)) + Z1 * Z2
        return _pm(TUBE, TUBE, fwd, [Z1, Z2, Z3], "qbeta_to_quadric")
    if name == "s0_to_cone":
        h = q(1, 2)
        return _pm(TUBE, TUBE, [(z1 - z3).scale(h), z2, (z1 + z3).scale(h)],
                   [z1 + z3, z2, z3 - z1], "s0_to_cone")
    if name == "s_normalize":
        # (a, b, c) with b^2 = |gamma| a^4 and c = b^2 / a carries S_{+-1} to S_gamma
        a = ExactScalar.coerce(kw.get("a", 1))
        b = ExactScalar.coerce(kw["b"])
        cc = b * b / a
        return _pm(TUBE, TUBE, [z1.scale(a), z2.scale(b), z3.scale(cc)],
                   [z1.scale(ONE / a), z2.scale(ONE / b), z3.scale(ONE / cc)], "s_normalize")
    if name == "a_family_rescale":
        s, t = ExactScalar.coerce(kw["s"]), ExactScalar.coerce(kw["t"])
        r = s / t
        return _pm(TUBE, TUBE, [z1, z2.scale(r), z3.scale(r)],
                   [z1, z2.scale(ONE / r), z3.scale(ONE / r)], "a_family_rescale")
    if name == "a1_simplify":
        return _pm(TUBE, TUBE, [z1, z2 - (z1 ** 2).scale(q(1, 2)), z3 - (z1 ** 3).scale(q(1, 3))],
                   [z1, z2 + (z1 ** 2).scale(q(1, 2)), z3 + (z1 ** 3).scale(q(1, 3))], "a1_simplify")
    if name == "a1_normalize":
        fwd = [z1, (z1 ** 2).scale(q(1, 2)) - z2.scale(q(1, 4)),
               (z1 ** 3).scale(q(1, 3)) - z3.scale(q(1, 4))]
        inv = [z, (z ** 2).scale(2) - w2.scale(4), (z ** 3).scale(q(4, 3)) - w3.scale(4)]
        inv = [p.substitute({"z": z1, "w2": z2, "w3": z3}) for p in inv]
        return _pm(TUBE, TUBE, fwd, inv, "a1_normalize")
    if name == "a_i_to_g":
        fwd = [z1, z2 + (z1 ** 2).scale(I), z3.scale(2) + (z1 ** 3).scale(2 * I)]
        inv = [z, w2 - (z ** 2).scale(I), (w3 - (z ** 3).scale(2 * I)).scale(q(1, 2))]
        return _pm(TUBE, AMBIENT, fwd, inv, "a_i_to_g")
    if name == "identity_ambient":
        return _pm(AMBIENT, AMBIENT, [z, w2, w3], [z, w2, w3], "identity_ambient")
    if name == "identity_tube":
        return _pm(TUBE, TUBE, [z1, z2, z3], [z1, z2, z3], "identity_tube")
    return _families(name)


def _families(name) -> PolyMap:
    """Group families with formal parameters (no polynomial inverse needed)."""
    z, w2, w3 = v("z"), v("w2"), v("w3")
    z1, z2, z3 = v("z1"), v("z2"), v("z3")
    lam, t, r = v("lam"), v("t"), v("r")
    a1, a2, a3 = v("a1"), v("a2"), v("a3")
    if name == "dilation":
        return PolyMap(T, AMBIENT, AMBIENT, [lam * z, lam ** 2 * w2, lam ** 3 * w3], name=name)
    if name == "polynomial_group":
        p, pb, q2, q3 = v("p"), v("pbar"), v("q2"), v("q3")
        rep = (p + pb).scale(q(1, 2))
        pp = p * pb
        fw2 = w2 + (pb * z).scale(2 * I) + pp.scale(I) + q2
        # 2 i Re(p^2 conj p) = i (p^2 pbar + pbar^2 p)
        fw3 = (w3 + (rep * w2).scale(4) + ((pp.scale(2) + pb ** 2) * z).scale(2 * I)
               + (pb * z ** 2).scale(2 * I) + (p * p * pb + pb * pb * p).scale(I) + q3)
        return PolyMap(T, AMBIENT, AMBIENT, [z + p, fw2, fw3], name=name)
    if name == "full_action":
        return _families("polynomial_group").then(_families("dilation"))
    if name == "tube_dilation":
        return PolyMap(T, TUBE, TUBE, [lam * z1, lam ** 2 * z2, lam ** 3 * z3], name=name)
    if name == "real_translation":
        return PolyMap(T, TUBE, TUBE, [z1 + a1, z2 + a2, z3 + a3], name=name)
    if name == "imaginary_translation":
        return PolyMap(T, TUBE, TUBE, [
            z1 + t.scale(I),
            z2 + (t * z1).scale(2) + (t ** 2).scale(I),
            z3 + (t * z2).scale(3) + (t ** 2 * z1).scale(3) + (t ** 3).scale(I)], name=name)
    if name == "a1_shear":
        return PolyMap(T, TUBE, TUBE, [
            z1 + t, z2 + t * z1 + (t ** 2).scale(q(1, 2)),
            z3 + (t * z2).scale(2) + t ** 2 * z1 + (t ** 3).scale(q(1, 3))], name=name)
    if name == "a0_translation":
        return PolyMap(T, TUBE, TUBE, [z1, z2 + a2, z3 + a3], name=name)
    if name == "a0_shear_t":
        return PolyMap(T, TUBE, TUBE, [z1 + t, z2, z3 + (t * z2).scale(2)], name=name)
    if name == "a0_shear_r":
        return PolyMap(T, TUBE, TUBE, [z1, z2 + r * z1, z3 + r * z1 ** 2], name=name)
    if name == "b_translation":
        return PolyMap(T, TUBE, TUBE, [z1 + a1, z2, z3 + a3], name=name)
    if name == "b_dilation":
        return PolyMap(T, TUBE, TUBE, [lam * z1, lam * z2, lam ** 3 * z3], name=name)
    if name == "b_shear_r":
        return PolyMap(T, TUBE, TUBE, [z1, z2, z3 + r * z2], name=name)
    if name == "b_shear_t":
        return PolyMap(T, TUBE, TUBE, [z1, z2 + t, z3 + t * z1 * z2 + (t ** 2 * z1).scale(q(1, 2))],
                       name=name)
    raise CatalogError(f"unknown map {name!r}")


MAP_NAMES = (
    "tube_to_ambient", "flip", "kill_pluriharmonic", "w2_twist", "orbit_to_quadric",
    "hermitian_to_indef", "qbeta_to_quadric", "s0_to_cone", "s_normalize",
    "a_family_rescale", "a1_simplify", "a1_normalize", "a_i_to_g",
    "identity_ambient", "identity_tube",
    "dilation", "polynomial_group", "full_action", "tube_dilation", "real_translation",
    "imaginary_translation", "a1_shear", "a0_translation", "a0_shear_t", "a0_shear_r",
    "b_translation", "b_dilation", "b_shear_r", "b_shear_t",
)


def make_map(name: str, **params) -> PolyMap:
    return _maps(name, **params)


# Which group families act on which orbit families.
GROUP_FAMILIES = {
    "A": ("tube_dilation", "real_translation", "imaginary_translation"),
    "A1": ("tube_dilation", "real_translation", "a1_shear"),
    "A0": ("tube_dilation", "a0_translation", "a0_shear_t", "a0_shear_r"),
    "B": ("b_translation", "b_dilation", "b_shear_r", "b_shear_t"),
}


# -- manifest ------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    parameters: tuple
    provenance: str
    build: Callable


def _entries():
    out = {}

    def add(name, kind, params, prov, build):
        if name in out:
            raise ValueError(f"duplicate catalog name {name}")
        out[name] = CatalogEntry(name, kind, tuple(params), prov, build)

    add("g", "algebra", (), "model algebra of the cubic (ambient basis X3..X0)",
        lambda **k: make_algebra("g"))
    add("g_tilde", "algebra", (), "tube realization over the twisted cubic",
        lambda **k: make_algebra("g_tilde"))
    add("A", "algebra", (("s", "rational | formal"), ("n", "rational | formal")),
        "family of transitive realizations, normalized X1' = s d/dz1 + 4z1 d/dz2 + (4z1^2+n) d/dz3",
        lambda s=None, n=0, **k: make_algebra("A", s=s, n=n))
    add("A1", "algebra", (), "normalized type A1", lambda **k: make_algebra("A1"))
    add("A0", "algebra", (), "normalized type A0", lambda **k: make_algebra("A0"))
    add("B", "algebra", (), "type B, orbits are Levi-flat", lambda **k: make_algebra("B"))
    hs = {
        "cubic_C": ((), "the model cubic, codimension 2"),
        "tube_cubic": ((), "tube over the twisted cubic"),
        "N_minus": ((("nu", "rational | formal"),), "type A orbits below the twisted cubic"),
        "N_plus": ((("nu", "rational | formal"),), "type A orbits above the twisted cubic"),
        "N_zero": ((), "type A orbit y2 = y1^2"),
        "S": ((("gamma", "rational | formal"),), "type A1 orbits"),
        "Q": ((("beta", "rational | formal"),), "type A0 orbits"),
        "Pi": ((("delta", "rational | formal"),), "type B orbits"),
        "quadric_indef": ((), "indefinite quadric Im z3 = |z1|^2 - |z2|^2"),
        "quadric_hermitian": ((), "quadric Im w3 = 2 Re(z conj w2)"),
        "quadric_im": ((), "quadric Im z3 = Im(z1 conj z2)"),
        "light_cone_tube": ((), "tube over the future light cone"),
        "orbit_Q_zero": ((), "ambient hypersurface Q = 0"),
        "M_plus": ((("mu", "rational | formal"),), "ambient orbits over the ball, mu = squared parameter"),
        "M_minus": ((("mu", "rational | formal"),), "ambient orbits over the ball complement"),
        "hyperplane": ((), "real hyperplane y3 = 0"),
        "sphere_cylinder": ((), "cylinder over the unit sphere in C^2"),
    }
    for name, (params, prov) in hs.items():
        add(name, "hypersurface", params, prov,
            (lambda n: (lambda **k: make_hypersurface(n, **k)))(name))
    for name in MAP_NAMES:
        kind = "group-family" if name in {
            "dilation", "polynomial_group", "full_action", "tube_dilation", "real_translation",
            "imaginary_translation", "a1_shear", "a0_translation", "a0_shear_t", "a0_shear_r",
            "b_translation", "b_dilation", "b_shear_r", "b_shear_t"} else "map"
        params = {
            "qbeta_to_quadric": (("beta", "rational | formal"),),
            "s_normalize": (("a", "rational"), ("b", "rational | sqrt2")),
            "a_family_rescale": (("s", "rational"), ("t", "rational")),
            "dilation": (("lam", "formal"),),
            "polynomial_group": (("p", "formal"), ("q2", "formal"), ("q3", "formal")),
            "full_action": (("lam", "formal"), ("p", "formal"), ("q2", "formal"), ("q3", "formal")),
            "tube_dilation": (("lam", "formal"),),
            "b_dilation": (("lam", "formal"),),
            "real_translation": (("a1", "formal"), ("a2", "formal"), ("a3", "formal")),
            "a0_translation": (("a2", "formal"), ("a3", "formal")),
            "b_translation": (("a1", "formal"), ("a3", "formal")),
            "imaginary_translation": (("t", "formal"),),
            "a1_shear": (("t", "formal"),),
            "a0_shear_t": (("t", "formal"),),
            "b_shear_t": (("t", "formal"),),
            "a0_shear_r": (("r", "formal"),),
            "b_shear_r": (("r", "formal"),),
        }.get(name, ())
        add(name, kind, params, _MAP_NOTES.get(name, ""),
            (lambda n: (lambda **k: make_map(n, **k)))(name))
    return out


_MAP_NOTES = {
    "tube_to_ambient": "biholomorphism of C^3 carrying the tube realization to the ambient one",
    "flip": "linear automorphism z -> -z, w3 -> -w3 of the cubic",
    "kill_pluriharmonic": "removes the pluriharmonic term of Q = 0",
    "w2_twist": "w2 -> -i w2 - z^2",
    "orbit_to_quadric": "Q = 0 onto Im w3 = 2 Re(z conj w2)",
    "hermitian_to_indef": "Im w3 = 2 Re(z conj w2) onto the standard indefinite quadric",
    "qbeta_to_quadric": "type A0 orbits onto the indefinite quadric",
    "s0_to_cone": "linear change taking the gamma = 0 orbit to the light-cone tube",
    "s_normalize": "diagonal scaling relating S_gamma to S_1 or S_-1",
    "a_family_rescale": "w2 = (s/t) z2, w3 = (s/t) z3 relating A(s) and A(t)",
    "a1_simplify": "z2 -> z2 - z1^2/2, z3 -> z3 - z1^3/3",
    "a1_normalize": "A(1) onto the normalized A1 basis",
    "a_i_to_g": "A(i) onto the model algebra",
    "dilation": "weighted dilations of the ambient space",
    "polynomial_group": "polynomial group providing homogeneity of the cubic",
    "full_action": "dilation after the polynomial group",
}

ENTRIES = _entries()


def manifest() -> str:
    rows = [{"name": e.name, "kind": e.kind,
             "parameters": [{"name": n, "role": r} for n, r in e.parameters],
             "provenance": e.provenance} for e in ENTRIES.values()]
    return json.dumps({"schema": "crmodel.catalog/1", "entries": rows}, indent=2, sort_keys=True)
