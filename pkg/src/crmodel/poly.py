"""Sparse multivariate polynomials over Q(i)[sqrt2] in named variables.

A :class:`VarTable` fixes the variable universe (complex coordinates, their
conjugates, real coordinates and formal parameters, each with a weight).
A :class:`Poly` maps dense exponent tuples to nonzero :class:`ExactScalar`
coefficients.  Polys are immutable; every operation returns a new one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .scalar import ONE, ZERO, I, ExactScalar, format_scalar, is_monomial_scalar

__all__ = [
    "COMPLEX", "CONJUGATE", "REAL", "PARAM",
    "VarTable", "Poly", "NotDivisible", "TableMismatch",
    "STANDARD", "REAL_NAMES", "var", "const", "format_poly",
]

COMPLEX = "complex-coordinate"
CONJUGATE = "conjugate-coordinate"
REAL = "real-coordinate"
PARAM = "formal-parameter"


class TableMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    """Raised by :meth:`Poly.divide_exact` when the division leaves a remainder."""


@dataclass(frozen=True)
class _Var:
    name: str
    kind: str
    weight: int
    partner: str | None = None
    # for real coordinates: (complex coordinate, "re" | "im")
    real_of: tuple[str, str] | None = None


class VarTable:
    """Ordered variable universe shared by a family of polynomials."""

    def __init__(self, variables: Iterable[_Var], coordinate_systems=()):
        self._vars = tuple(variables)
        self.names = tuple(v.name for v in self._vars)
        self.index = {n: k for k, n in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ValueError("duplicate variable names")
        for v in self._vars:
            if v.kind in (COMPLEX, CONJUGATE) and v.partner is None:
                raise ValueError(f"{v.name}: coordinate without conjugate partner")
            if v.partner is not None:
                p = self._vars[self.index[v.partner]]
                if p.partner != v.name:
                    raise ValueError(f"{v.name}: partner {p.name} is not paired back")
                if p.weight != v.weight:
                    raise ValueError(f"{v.name}: paired weights differ")
        self.coordinate_systems = tuple(tuple(cs) for cs in coordinate_systems)
        self._key = tuple((v.name, v.kind, v.weight, v.partner, v.real_of) for v in self._vars)
        self._hash = hash(self._key)

    # construction helpers

    @classmethod
    def build(cls, coords: Mapping[str, int], reals: Mapping[str, tuple] = (),
              params: Iterable[str] = (), paired_params: Iterable[tuple[str, str]] = (),
              coordinate_systems=()) -> "VarTable":
        """Build a table.

        ``coords`` maps complex coordinate names to weights; a conjugate
        ``<name>bar`` is created for each.  ``reals`` maps real coordinate
        names to ``(complex coordinate, "re"|"im")``.
        """
        out = []
        for n, w in coords.items():
            out.append(_Var(n, COMPLEX, w, n + "bar"))
        for n, w in coords.items():
            out.append(_Var(n + "bar", CONJUGATE, w, n))
        for n, link in dict(reals).items():
            w = coords[link[0]] if link and link[0] in coords else 0
            out.append(_Var(n, REAL, w, None, tuple(link) if link else None))
        for n in params:
            out.append(_Var(n, PARAM, 0))
        for a, b in paired_params:
            out.append(_Var(a, PARAM, 0, b))
            out.append(_Var(b, PARAM, 0, a))
        return cls(out, coordinate_systems)

    def __len__(self):
        return len(self._vars)

    def __eq__(self, other):
        return isinstance(other, VarTable) and (self is other or self._key == other._key)

    def __hash__(self):
        return self._hash

    def __contains__(self, name):
        return name in self.index

    def var(self, name: str) -> _Var:
        try:
            return self._vars[self.index[name]]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def kind(self, name: str) -> str:
        return self.var(name).kind

    def weight(self, name: str) -> int:
        return self.var(name).weight

    def conj_name(self, name: str) -> str:
        v = self.var(name)
        return v.partner if v.partner is not None else name

    @cached_property
    def conj_perm(self) -> tuple[int, ...]:
        return tuple(self.index[self.conj_name(n)] for n in self.names)

    @cached_property
    def weights(self) -> tuple[int, ...]:
        return tuple(v.weight for v in self._vars)

    def names_of_kind(self, kind: str) -> tuple[str, ...]:
        return tuple(v.name for v in self._vars if v.kind == kind)

    def coordinate_system_of(self, names: Iterable[str]) -> tuple[str, ...]:
        names = set(names)
        for cs in self.coordinate_systems:
            if names <= set(cs):
                return cs
        raise KeyError(f"no coordinate system contains {sorted(names)}")

    def real_parts(self, coord: str) -> tuple[str | None, str | None]:
        """Names of the real variables registered as Re/Im of ``coord``."""
        re = im = None
        for v in self._vars:
            if v.real_of == (coord, "re"):
                re = v.name
            elif v.real_of == (coord, "im"):
                im = v.name
        return re, im

    def __repr__(self):
        return f"VarTable({', '.join(self.names)})"


def _grlex_key(exp):
    return (sum(exp), exp)


class Poly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to scalars."""

    __slots__ = ("table", "terms", "__weakref__")

    def __init__(self, table: VarTable, terms: Mapping[tuple, ExactScalar] | None = None):
        self.table = table
        clean = {}
        if terms:
            n = len(table)
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError("exponent vector length does not match the table")
                c = ExactScalar.coerce(c)
                if not c.is_zero():
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, table, terms):
        obj = object.__new__(cls)
        obj.table = table
        obj.terms = terms
        return obj

    # constructors

    @classmethod
    def zero(cls, table: VarTable) -> "Poly":
        return cls._raw(table, {})

    @classmethod
    def const(cls, table: VarTable, c) -> "Poly":
        c = ExactScalar.coerce(c)
        if c.is_zero():
            return cls._raw(table, {})
        return cls._raw(table, {(0,) * len(table): c})

    @classmethod
    def var(cls, table: VarTable, name: str) -> "Poly":
        e = [0] * len(table)
        e[table.index[name]] = 1
        return cls._raw(table, {tuple(e): ONE})

    @classmethod
    def monomial(cls, table: VarTable, powers: Mapping[str, int], c=1) -> "Poly":
        e = [0] * len(table)
        for n, k in powers.items():
            e[table.index[n]] += k
        return cls(table, {tuple(e): ExactScalar.coerce(c)})

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> ExactScalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values())) if self.terms else ZERO

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for k, p in enumerate(e):
                if p:
                    used.add(self.table.names[k])
        return used

    def degree(self, names: Iterable[str] | None = None) -> int:
        if not self.terms:
            return -1
        if names is None:
            return max(sum(e) for e in self.terms)
        idx = [self.table.index[n] for n in names]
        return max(sum(e[k] for k in idx) for e in self.terms)

    def leading(self):
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # arithmetic

    def _check(self, other: "Poly"):
        if self.table is not other.table and self.table != other.table:
            raise TableMismatch("polynomials live over different variable tables")

    def _lift(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.table, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return Poly._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.table, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Poly":
        c = ExactScalar.coerce(c)
        if c.is_zero():
            return Poly.zero(self.table)
        return Poly._raw(self.table, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        if len(self.terms) > len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: dict = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(map(int.__add__, e1, e2))
                s = get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw(self.table, {e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Poly.const(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c):
        if isinstance(c, Poly):
            if not c.is_constant():
                return self.divide_exact(c)
            c = c.constant_value()
        return self.scale(ONE / ExactScalar.coerce(c))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.table == other.table and self.terms == other.terms
        try:
            return self.terms == Poly.const(self.table, other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # calculus and structure

    def diff(self, name: str) -> "Poly":
        if name not in self.table.index:
            raise KeyError(f"unknown variable {name!r}")
        k = self.table.index[name]
        out = {}
        for e, c in self.terms.items():
            p = e[k]
            if p:
                ne = list(e)
                ne[k] = p - 1
                out[tuple(ne)] = c * p
        return Poly._raw(self.table, out)

    def conjugate(self) -> "Poly":
        perm = self.table.conj_perm
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(e)
            for k, p in enumerate(e):
                if p:
                    ne[perm[k]] = p
            out[tuple(ne)] = c.conjugate()
        return Poly._raw(self.table, out)

    def real_part(self) -> "Poly":
        return (self + self.conjugate()).scale(ExactScalar(1, 0) / 2)

    def imag_part(self) -> "Poly":
        return (self - self.conjugate()) * (ONE / (I * 2))

    def substitute(self, bindings: Mapping[str, "Poly"]) -> "Poly":
        """Simultaneously replace variables by polynomials (exact composition)."""
        table = self.table
        idx = []
        for n, img in bindings.items():
            if n not in table.index:
                raise KeyError(f"unknown variable {n!r}")
            if not isinstance(img, Poly):
                img = Poly.const(table, img)
                bindings = {**bindings, n: img}
            elif img.table != table:
                raise TableMismatch(f"image of {n} lives over a different table")
            idx.append((table.index[n], bindings[n]))
        if not idx:
            return self
        powers: dict = {}

        def power(k, img, p):
            key = (k, p)
            r = powers.get(key)
            if r is None:
                r = img if p == 1 else power(k, img, p - 1) * img
                powers[key] = r
            return r

        bound = {k for k, _ in idx}
        result = Poly.zero(table)
        acc: dict = {}
        for e, c in self.terms.items():
            rest = tuple(0 if k in bound else p for k, p in enumerate(e))
            term = Poly._raw(table, {rest: c})
            for k, img in idx:
                p = e[k]
                if p:
                    term = term * power(k, img, p)
            for te, tc in term.terms.items():
                s = acc.get(te)
                acc[te] = tc if s is None else s + tc
        result = Poly._raw(table, {e: c for e, c in acc.items() if not c.is_zero()})
        return result

    def evaluate(self, values: Mapping[str, object]) -> "Poly":
        return self.substitute({n: Poly.const(self.table, v) for n, v in values.items()})

    def divide_exact(self, g: "Poly") -> "Poly":
        """Return ``q`` with ``self == q * g`` or raise :class:`NotDivisible`.

        Single-divisor division in graded-lex order; ``{g}`` is a Groebner basis
        of ``(g)``, so the first leading term not divisible by ``lt(g)`` proves
        a nonzero remainder.
        """
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        ge, gc = g.leading()
        ginv = ONE / gc
        r = self
        q: dict = {}
        while r.terms:
            e, c = r.leading()
            if any(a < b for a, b in zip(e, ge)):
                raise NotDivisible("nonzero remainder")
            qe = tuple(a - b for a, b in zip(e, ge))
            qc = c * ginv
            q[qe] = qc
            r = r - g * Poly._raw(self.table, {qe: qc})
        return Poly._raw(self.table, q)

    def divides(self, f: "Poly") -> bool:
        try:
            f.divide_exact(self)
        except NotDivisible:
            return False
        return True

    def weight_interval(self, weights: Mapping[str, int] | None = None):
        """``(min, max)`` weight over terms, or ``None`` for the zero polynomial."""
        if not self.terms:
            return None
        w = self.table.weights
        if weights:
            w = tuple(weights.get(n, w[k]) for k, n in enumerate(self.table.names))
        ws = [sum(a * b for a, b in zip(e, w)) for e in self.terms]
        return (min(ws), max(ws))

    def homogeneous_parts(self, weights: Mapping[str, int] | None = None) -> dict:
        w = self.table.weights
        if weights:
            w = tuple(weights.get(n, w[k]) for k, n in enumerate(self.table.names))
        parts: dict = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(a * b for a, b in zip(e, w)), {})[e] = c
        return {k: Poly._raw(self.table, v) for k, v in sorted(parts.items())}

    def coefficients_in(self, names: Iterable[str]) -> dict:
        """Group terms by the exponents of ``names``; values are polys in the rest."""
        idx = [self.table.index[n] for n in names]
        groups: dict = {}
        for e, c in self.terms.items():
            key = tuple(e[k] for k in idx)
            rest = list(e)
            for k in idx:
                rest[k] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        return {k: Poly._raw(self.table, v) for k, v in groups.items()}

    def is_real(self) -> bool:
        return self == self.conjugate()

    def to_complex(self) -> complex:
        return complex(self.constant_value())

    # text

    def monomial_text(self, e) -> str:
        parts = []
        for k, p in enumerate(e):
            if not p:
                continue
            v = self.table._vars[k]
            name = f"conj({v.partner})" if v.kind == CONJUGATE else v.name
            parts.append(name if p == 1 else f"{name}^{p}")
        return "*".join(parts)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def format_term(c: ExactScalar, mono: str) -> str:
    if not mono:
        txt = format_scalar(c)
        return txt if is_monomial_scalar(c) or c.is_zero() else f"({txt})"
    if c == ONE:
        return mono
    if c == -ONE:
        return "-" + mono
    if is_monomial_scalar(c):
        return f"{format_scalar(c)}*{mono}"
    return f"({format_scalar(c)})*{mono}"


def join_terms(pieces: list[str]) -> str:
    if not pieces:
        return "0"
    out = pieces[0]
    for p in pieces[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def format_poly(f: Poly) -> str:
    """Canonical text: graded-lex descending terms, canonical scalars."""
    return join_terms([format_term(c, f.monomial_text(e)) for e, c in f.sorted_terms()])


# The shared variable universe used by the catalog, the CLI and the tests.
# Ambient coordinates (z, w2, w3) and tube coordinates (z1, z2, z3) both
# realify onto x1..y3 by position.
STANDARD = VarTable.build(
    {"z": 1, "w2": 2, "w3": 3, "z1": 1, "z2": 2, "z3": 3},
    reals={
        "x1": ("z1", "re"), "y1": ("z1", "im"),
        "x2": ("z2", "re"), "y2": ("z2", "im"),
        "x3": ("z3", "re"), "y3": ("z3", "im"),
    },
    params=("lam", "q2", "q3", "nu", "mu", "beta", "gamma", "delta",
            "s", "n", "t", "r", "a1", "a2", "a3", "u"),
    paired_params=(("p", "pbar"),),
    coordinate_systems=(("z", "w2", "w3"), ("z1", "z2", "z3")),
)

REAL_NAMES = ("x1", "y1", "x2", "y2", "x3", "y3")


def var(name: str, table: VarTable = STANDARD) -> Poly:
    return Poly.var(table, name)


def const(c, table: VarTable = STANDARD) -> Poly:
    return Poly.const(table, c)
