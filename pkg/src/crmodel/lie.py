"""Holomorphic polynomial vector fields, brackets, structure tables, maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import linalg
from .poly import COMPLEX, CONJUGATE, PARAM, REAL_NAMES, Poly, TableMismatch, VarTable, join_terms
from .scalar import I, ONE, ZERO, ExactScalar, format_scalar, is_monomial_scalar

__all__ = [
    "HolomorphyError", "HoloVField", "bracket", "StructureTable", "NotClosed",
    "closure_table", "MatchReport", "verify_structure", "PolyMap", "MapError",
    "pushforward", "graded_decompose", "real_vector", "same_real_span", "proportionality",
    "real_independent", "complexify", "realify", "lie_derivative", "real_span_coords",
]


class HolomorphyError(ValueError):
    pass


def _check_holomorphic(table: VarTable, coords, poly: Poly):
    allowed = set(coords)
    for v in poly.variables():
        kind = table.kind(v)
        if kind == CONJUGATE:
            raise HolomorphyError(f"coefficient contains the conjugate variable {v}")
        if kind == PARAM:
            continue
        if v not in allowed:
            raise HolomorphyError(f"coefficient variable {v} is not a coordinate of {coords}")


class HoloVField:
    """``sum_j coeffs[j] * d/d coords[j]``; the real field is its doubled real part."""

    __slots__ = ("table", "coords", "coeffs")

    def __init__(self, table: VarTable, coords: Sequence[str], coeffs: Sequence[Poly]):
        coords = tuple(coords)
        coeffs = tuple(coeffs)
        if len(coords) != len(coeffs):
            raise ValueError("one coefficient per coordinate is required")
        for c in coords:
            if table.kind(c) != COMPLEX:
                raise ValueError(f"{c} is not a complex coordinate")
        for f in coeffs:
            if f.table != table:
                raise TableMismatch("coefficient over a different table")
            _check_holomorphic(table, coords, f)
        self.table = table
        self.coords = coords
        self.coeffs = coeffs

    @classmethod
    def from_dict(cls, table: VarTable, coords, parts: Mapping[str, Poly]) -> "HoloVField":
        unknown = set(parts) - set(coords)
        if unknown:
            raise KeyError(f"derivations {sorted(unknown)} are not in {coords}")
        return cls(table, coords, [parts.get(c, Poly.zero(table)) for c in coords])

    @classmethod
    def zero(cls, table, coords) -> "HoloVField":
        return cls(table, coords, [Poly.zero(table)] * len(coords))

    def _same(self, other: "HoloVField"):
        if self.table != other.table:
            raise TableMismatch("fields live over different tables")
        if self.coords != other.coords:
            raise TableMismatch(f"fields use different coordinates {self.coords} / {other.coords}")

    def apply(self, g: Poly) -> Poly:
        """Derivative of the holomorphic function ``g`` along the field."""
        out = Poly.zero(self.table)
        for c, f in zip(self.coords, self.coeffs):
            if f:
                out = out + f * g.diff(c)
        return out

    def __add__(self, other: "HoloVField") -> "HoloVField":
        self._same(other)
        return HoloVField(self.table, self.coords, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "HoloVField") -> "HoloVField":
        self._same(other)
        return HoloVField(self.table, self.coords, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return HoloVField(self.table, self.coords, [-a for a in self.coeffs])

    def scale(self, c) -> "HoloVField":
        if isinstance(c, Poly):
            return HoloVField(self.table, self.coords, [c * a for a in self.coeffs])
        return HoloVField(self.table, self.coords, [a.scale(c) for a in self.coeffs])

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return (isinstance(other, HoloVField) and self.coords == other.coords
                and self.table == other.table and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.coords, self.coeffs))

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.coeffs)

    def substitute_params(self, values: Mapping[str, object]) -> "HoloVField":
        return HoloVField(self.table, self.coords, [f.evaluate(values) for f in self.coeffs])

    def weights(self, weights: Mapping[str, int] | None = None) -> dict:
        w = {c: self.table.weight(c) for c in self.coords}
        if weights:
            w.update({k: v for k, v in weights.items() if k in w})
        return w

    def weight_interval(self, weights: Mapping[str, int] | None = None):
        parts = graded_decompose(self, weights)
        if not parts:
            return None
        return (parts[0][0], parts[-1][0])

    def __str__(self):
        pieces = []
        for c, f in zip(self.coords, self.coeffs):
            if not f:
                continue
            d = f"d/d{c}"
            if len(f.terms) == 1:
                (e, k), = f.terms.items()
                mono = f.monomial_text(e)
                mono = f"{mono}*{d}" if mono else d
                if k == ONE:
                    pieces.append(mono)
                elif k == -ONE:
                    pieces.append("-" + mono)
                elif is_monomial_scalar(k):
                    pieces.append(f"{format_scalar(k)}*{mono}")
                else:
                    pieces.append(f"({format_scalar(k)})*{mono}")
            else:
                pieces.append(f"({f})*{d}")
        return join_terms(pieces)

    def __repr__(self):
        return f"HoloVField({str(self)!r})"


def bracket(X: HoloVField, Y: HoloVField) -> HoloVField:
    """``[X, Y]^j = X(Y^j) - Y(X^j)``."""
    X._same(Y)
    return HoloVField(X.table, X.coords,
                      [X.apply(b) - Y.apply(a) for a, b in zip(X.coeffs, Y.coeffs)])


def graded_decompose(X: HoloVField, weights: Mapping[str, int] | None = None) -> list:
    """Weight-homogeneous parts ``[(k, X_k), ...]`` in increasing ``k``."""
    w = X.weights(weights)
    table = X.table
    tw = {n: w.get(n, table.weight(n)) for n in table.names}
    parts: dict = {}
    for j, (c, f) in enumerate(zip(X.coords, X.coeffs)):
        for k, piece in f.homogeneous_parts(tw).items():
            parts.setdefault(k - w[c], [Poly.zero(table)] * len(X.coords))[j] = piece
    return [(k, HoloVField(table, X.coords, parts[k])) for k in sorted(parts)]


# -- real-linear structure ---------------------------------------------------

def real_vector(X: HoloVField) -> dict:
    """Coordinates of ``X`` in a real basis: keys ``(j, exponent, 're'|'im')``.

    Two fields are real-proportional iff these vectors are.  Formal
    parameters count as real.
    """
    out = {}
    for j, f in enumerate(X.coeffs):
        for e, c in f.terms.items():
            re, im = c.real(), c.imag()
            if re:
                out[(j, e, 0)] = re
            if im:
                out[(j, e, 1)] = im
    return out


def real_independent(fields: Sequence[HoloVField]) -> bool:
    return linalg.rank(real_vector(X) for X in fields) == len(fields)


def real_span_coords(basis: Sequence[HoloVField], X: HoloVField):
    """Real coefficients of ``X`` in ``basis`` or ``None`` if not in the span."""
    vecs = [real_vector(B) for B in basis]
    sol = linalg.express(vecs, real_vector(X))
    if sol is None:
        return None
    if not all(c.is_real() for c in sol):
        # independent real vectors force a real solution; anything else is a bug
        raise ArithmeticError("non-real coordinates for a real span")
    return sol


def proportionality(X: HoloVField, Y: HoloVField):
    """Scalar ``c`` with ``X == c * Y``, or ``None``."""
    if Y.is_zero():
        return ZERO if X.is_zero() else None
    j = next(k for k, f in enumerate(Y.coeffs) if f)
    e, v = next(iter(Y.coeffs[j].terms.items()))
    c = X.coeffs[j].terms.get(e, ZERO) / v
    return c if X == Y.scale(c) else None


def same_real_span(A: Sequence[HoloVField], B: Sequence[HoloVField]) -> bool:
    ra = linalg.rank(real_vector(X) for X in A)
    rb = linalg.rank(real_vector(X) for X in B)
    rab = linalg.rank([real_vector(X) for X in A] + [real_vector(X) for X in B])
    return ra == rb == rab


# -- structure tables ----------------------------------------------------------

class StructureTable:
    """Structure constants ``[e_i, e_j] = sum_k c[i, j][k] e_k`` (real)."""

    def __init__(self, labels: Sequence[str], brackets: Mapping[tuple, Mapping]):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        idx = {l: k for k, l in enumerate(self.labels)}
        self.c: dict = {}
        for (a, b), out in brackets.items():
            i = idx[a] if isinstance(a, str) else a
            j = idx[b] if isinstance(b, str) else b
            vec = {}
            for lab, v in out.items():
                k = idx[lab] if isinstance(lab, str) else lab
                v = ExactScalar.coerce(v)
                if v:
                    vec[k] = v
            if i == j:
                if vec:
                    raise ValueError("[e, e] must vanish")
                continue
            neg = {k: -v for k, v in vec.items()}
            for key, val in (((i, j), vec), ((j, i), neg)):
                if key in self.c and self.c[key] != val:
                    raise ValueError(f"inconsistent entries for {key}")
                self.c[key] = val

    def get(self, i: int, j: int) -> dict:
        return self.c.get((i, j), {})

    def antisymmetric(self) -> bool:
        return all({k: -v for k, v in self.get(j, i).items()} == self.get(i, j)
                   for i in range(self.dim) for j in range(self.dim))

    def _br(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.get(i, j).items():
                    s = out.get(k, ZERO) + a * b * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def jacobi_violations(self) -> list:
        bad = []
        e = [{k: ONE} for k in range(self.dim)]
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    tot: dict = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        linalg._axpy(tot, ONE, self._br(e[a], self._br(e[b], e[c])))
                    if tot:
                        bad.append((self.labels[i], self.labels[j], self.labels[k]))
        return bad

    def jacobi(self) -> bool:
        return not self.jacobi_violations()

    def rescaled(self, d: Sequence) -> "StructureTable":
        """Table of the basis ``e_i' = d_i e_i``: ``c'_ij^k = d_i d_j c_ij^k / d_k``."""
        d = [ExactScalar.coerce(x) for x in d]
        out = {}
        for (i, j), vec in self.c.items():
            if i < j:
                out[(i, j)] = {k: d[i] * d[j] * v / d[k] for k, v in vec.items()}
        return StructureTable(self.labels, out)

    def entry_text(self, i: int, j: int) -> str:
        return combination_text(self.get(i, j), self.labels)

    def __eq__(self, other):
        return (isinstance(other, StructureTable) and self.labels == other.labels
                and self.c == other.c)

    def nonzero_brackets(self):
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                yield i, j, self.get(i, j)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "brackets": {f"[{self.labels[i]},{self.labels[j]}]": self.entry_text(i, j)
                         for i in range(self.dim) for j in range(i + 1, self.dim)},
        }


def combination_text(vec: Mapping[int, ExactScalar], labels) -> str:
    pieces = []
    for k in sorted(vec):
        c = vec[k]
        lab = labels[k]
        if c == ONE:
            pieces.append(lab)
        elif c == -ONE:
            pieces.append("-" + lab)
        elif is_monomial_scalar(c):
            pieces.append(f"{format_scalar(c)}*{lab}")
        else:
            pieces.append(f"({format_scalar(c)})*{lab}")
    return join_terms(pieces)


class NotClosed(Exception):
    def __init__(self, i, j, value: HoloVField, labels=None):
        self.pair = (i, j)
        self.value = value
        names = (labels[i], labels[j]) if labels else (i, j)
        self.labels = names
        super().__init__(f"[{names[0]}, {names[1]}] = {value} is not in the real span")


def closure_table(basis: Sequence[HoloVField], labels: Sequence[str] | None = None) -> StructureTable:
    """Exact structure constants of the real span of ``basis``.

    Raises :class:`NotClosed` naming the first bracket outside the span, and
    ``ValueError`` when the basis is dependent over the reals.
    """
    labels = tuple(labels) if labels else tuple(f"e{k}" for k in range(len(basis)))
    if not real_independent(basis):
        raise ValueError("basis fields are linearly dependent over the reals")
    vecs = [real_vector(X) for X in basis]
    out = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            b = bracket(basis[i], basis[j])
            sol = linalg.express(vecs, real_vector(b))
            if sol is None:
                raise NotClosed(i, j, b, labels)
            out[(i, j)] = {k: c for k, c in enumerate(sol) if c}
    return StructureTable(labels, out)


@dataclass
class MatchReport:
    closed: bool
    jacobi: bool
    deviations: list = field(default_factory=list)  # (label_i, label_j, found, expected)
    table: StructureTable | None = None
    not_closed: str | None = None

    @property
    def ok(self) -> bool:
        return self.closed and self.jacobi and not self.deviations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "closed": self.closed,
            "jacobi": self.jacobi,
            "not_closed": self.not_closed,
            "deviations": [
                {"bracket": f"[{a},{b}]", "found": f, "expected": e}
                for a, b, f, e in self.deviations
            ],
        }


def verify_structure(basis: Sequence[HoloVField], expected: StructureTable,
                     rescalings: Sequence | None = None) -> MatchReport:
    """Compare the bracket table of ``basis`` with ``expected``.

    ``rescalings[i] = d_i`` declares that ``d_i * basis[i]`` is the field
    matching the abstract element ``i``.
    """
    if len(basis) != expected.dim:
        raise ValueError("basis size differs from the table dimension")
    try:
        found = closure_table(basis, expected.labels)
    except NotClosed as exc:
        return MatchReport(False, False, [], None, str(exc))
    if rescalings is not None:
        found = found.rescaled(rescalings)
    dev = []
    for i in range(expected.dim):
        for j in range(i + 1, expected.dim):
            if found.get(i, j) != expected.get(i, j):
                dev.append((expected.labels[i], expected.labels[j],
                            found.entry_text(i, j), expected.entry_text(i, j)))
    return MatchReport(True, found.jacobi(), dev, found)


# -- coordinate realification ------------------------------------------------

def complexify(rho: Poly, coords: Sequence[str]) -> Poly:
    """Rewrite a polynomial in x_k, y_k as one in coords[k] and their conjugates."""
    t = rho.table
    half = ExactScalar(1, 0) / 2
    b = {}
    for k, c in enumerate(coords):
        cz, cb = Poly.var(t, c), Poly.var(t, t.conj_name(c))
        b[REAL_NAMES[2 * k]] = (cz + cb).scale(half)
        b[REAL_NAMES[2 * k + 1]] = (cz - cb).scale(ONE / (I * 2))
    return rho.substitute(b)


def realify(f: Poly, coords: Sequence[str]) -> Poly:
    """Rewrite coords[k] as x_k + i*y_k (and conjugates as x_k - i*y_k)."""
    t = f.table
    b = {}
    for k, c in enumerate(coords):
        x, y = Poly.var(t, REAL_NAMES[2 * k]), Poly.var(t, REAL_NAMES[2 * k + 1])
        b[c] = x + y.scale(I)
        b[t.conj_name(c)] = x - y.scale(I)
    return f.substitute(b)


def lie_derivative(X: HoloVField, rho: Poly) -> Poly:
    """Derivative of the real polynomial ``rho(x, y)`` along ``2 Re X``.

    For ``f d/dz`` the real field is ``Re f d/dx + Im f d/dy``.
    """
    out = Poly.zero(rho.table)
    for k, f in enumerate(X.coeffs):
        if not f:
            continue
        F = realify(f, X.coords)
        re, im = F.real_part(), F.imag_part()
        xk, yk = REAL_NAMES[2 * k], REAL_NAMES[2 * k + 1]
        if re:
            out = out + re * rho.diff(xk)
        if im:
            out = out + im * rho.diff(yk)
    return out


# -- polynomial maps -----------------------------------------------------------

class MapError(ValueError):
    pass


class PolyMap:
    """Polynomial map ``src -> dst`` with a declared polynomial inverse.

    ``forward[k]`` is the image of ``dst[k]`` written in the ``src``
    coordinates; ``inverse[k]`` writes ``src[k]`` in the ``dst`` coordinates.
    Construction verifies both compositions exactly.
    """

    def __init__(self, table: VarTable, src, dst, forward, inverse=None, name: str = ""):
        self.table = table
        self.src = tuple(src)
        self.dst = tuple(dst)
        self.forward = tuple(forward)
        self.inverse = tuple(inverse) if inverse is not None else None
        self.name = name
        for f in self.forward:
            _check_holomorphic(table, self.src, f)
        if self.inverse is not None:
            for g in self.inverse:
                _check_holomorphic(table, self.dst, g)
        self.verified = False
        if self.inverse is not None:
            self.verified = self._check_inverse()
            if not self.verified:
                raise MapError(f"declared inverse of {name or 'map'} does not invert it")

    def _check_inverse(self) -> bool:
        t = self.table
        # forward(inverse(w)) == w
        to_src = dict(zip(self.src, self.inverse))
        for d, f in zip(self.dst, self.forward):
            if f.substitute(to_src) != Poly.var(t, d):
                return False
        to_dst = dict(zip(self.dst, self.forward))
        for s, g in zip(self.src, self.inverse):
            if g.substitute(to_dst) != Poly.var(t, s):
                return False
        return True

    def pull(self, g: Poly) -> Poly:
        """``g o F`` for a holomorphic ``g`` in the dst coordinates."""
        return g.substitute(dict(zip(self.dst, self.forward)))

    def pull_real(self, rho: Poly) -> Poly:
        """``rho o F`` for a real polynomial in x_k, y_k read as dst coordinates.

        The result is written in x_k, y_k read as src coordinates.
        """
        t = self.table
        c = complexify(rho, self.dst)
        b = {}
        for d, f in zip(self.dst, self.forward):
            b[d] = f
            b[t.conj_name(d)] = f.conjugate()
        return realify(c.substitute(b), self.src)

    def push_real(self, rho: Poly) -> Poly:
        """``rho o F^{-1}``: transports a real polynomial from src to dst."""
        return self.inverted().pull_real(rho)

    def inverted(self) -> "PolyMap":
        if self.inverse is None:
            raise MapError("map has no declared inverse")
        return PolyMap(self.table, self.dst, self.src, self.inverse, self.forward,
                       name=f"{self.name}^-1" if self.name else "")

    def then(self, other: "PolyMap") -> "PolyMap":
        """Composition ``other o self``."""
        if other.src != self.dst:
            raise MapError("composition: coordinate systems do not match")
        fwd = [g.substitute(dict(zip(other.src, self.forward))) for g in other.forward]
        inv = None
        if self.inverse is not None and other.inverse is not None:
            inv = [g.substitute(dict(zip(self.dst, other.inverse))) for g in self.inverse]
        return PolyMap(self.table, self.src, other.dst, fwd, inv,
                       name=f"{other.name}*{self.name}")

    def evaluate_params(self, values: Mapping[str, object]) -> "PolyMap":
        fwd = [f.evaluate(values) for f in self.forward]
        inv = [g.evaluate(values) for g in self.inverse] if self.inverse is not None else None
        return PolyMap(self.table, self.src, self.dst, fwd, inv, name=self.name)

    def __str__(self):
        return "; ".join(f"{d} = {f}" for d, f in zip(self.dst, self.forward))

    def __repr__(self):
        return f"PolyMap({self.name!r}: {self})"


def pushforward(F: PolyMap, X: HoloVField) -> HoloVField:
    """``Y^j = X(F_j) o F^{-1}`` on the dst coordinates."""
    if not F.verified:
        raise MapError("pushforward needs a map with a verified inverse")
    if X.coords != F.src:
        raise MapError(f"field lives on {X.coords}, map starts on {F.src}")
    back = dict(zip(F.src, F.inverse))
    return HoloVField(X.table, F.dst, [X.apply(f).substitute(back) for f in F.forward])
