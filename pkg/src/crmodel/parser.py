"""Text front end: polynomials, holomorphic fields and polynomial maps.

Grammar (precedence climbing, lowest first)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := NUMBER | "i" | "sqrt2" | NAME | "d/d" NAME
            | ("Re" | "Im" | "conj") "(" expr ")" | "(" expr ")"

``^`` binds tighter than unary minus, so ``-z^2`` is ``-(z^2)``.  Products
must be written with ``*``; ``2z`` is a syntax error.  Division is only by
nonzero constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .lie import HoloVField, PolyMap
from .poly import COMPLEX, PARAM, REAL, STANDARD, Poly, VarTable
from .scalar import I, SQRT2, ExactScalar

__all__ = [
    "ParseError", "parse_poly", "parse_field", "parse_map", "parse_scalar",
    "session_table", "tokenize",
]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None, text: str = ""):
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")
        self.pos = pos
        self.text = text


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<deriv>d/d[A-Za-z_][A-Za-z0-9_]*)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>[-+*/^(),=;\[\]])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Field:
    """Formal sum of ``poly * d/dv`` while parsing."""

    def __init__(self, parts: dict):
        self.parts = parts

    def combine(self, other: "_Field", sign: int) -> "_Field":
        out = dict(self.parts)
        for k, p in other.parts.items():
            out[k] = out[k] + p.scale(sign) if k in out else p.scale(sign)
        return _Field(out)

    def scale(self, f: Poly) -> "_Field":
        return _Field({k: f * p for k, p in self.parts.items()})


class _Parser:
    def __init__(self, text: str, table: VarTable, allowed=None):
        self.text = text
        self.table = table
        self.allowed = None if allowed is None else set(allowed)
        self.toks = tokenize(text)
        self.k = 0

    # token helpers
    @property
    def cur(self) -> Token:
        return self.toks[self.k]

    def take(self) -> Token:
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, text: str) -> Token:
        if self.cur.text != text:
            self.fail(f"expected {text!r}")
        return self.take()

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.cur
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"{msg}, found {found}", tok.pos, self.text)

    def finish(self):
        if self.cur.kind != "end":
            self.fail("unexpected token (products need an explicit '*')")

    # grammar
    def expr(self):
        left = self.term()
        while self.cur.text in ("+", "-"):
            op = self.take()
            right = self.term()
            left = self._add(left, right, 1 if op.text == "+" else -1, op)
        return left

    def term(self):
        left = self.unary()
        while self.cur.text in ("*", "/"):
            op = self.take()
            right = self.unary()
            left = self._mul(left, right, op) if op.text == "*" else self._div(left, right, op)
        return left

    def unary(self):
        if self.cur.text in ("+", "-"):
            op = self.take()
            v = self.unary()
            if op.text == "+":
                return v
            return v.scale(Poly.const(self.table, -1)) if isinstance(v, _Field) else -v
        return self.power()

    def power(self):
        base = self.atom()
        if self.cur.text == "^":
            op = self.take()
            tok = self.take()
            if tok.kind != "num" or "." in tok.text:
                self.fail("exponent must be a nonnegative integer literal", tok)
            if isinstance(base, _Field):
                self.fail("cannot raise a derivation to a power", op)
            base = base ** int(tok.text)
            if self.cur.text == "^":
                self.fail("chained powers need parentheses")
        return base

    def atom(self):
        tok = self.cur
        t = self.table
        if tok.kind == "num":
            self.take()
            return Poly.const(t, Fraction(tok.text))
        if tok.kind == "deriv":
            self.take()
            name = tok.text[3:]
            if name not in t or t.kind(name) != COMPLEX:
                self.fail(f"d/d{name} is not a complex coordinate derivation", tok)
            return _Field({name: Poly.const(t, 1)})
        if tok.text == "(":
            self.take()
            v = self.expr()
            self.expect(")")
            return v
        if tok.kind == "name":
            self.take()
            if tok.text in ("Re", "Im", "conj") and self.cur.text == "(":
                self.take()
                inner = self.expr()
                self.expect(")")
                if isinstance(inner, _Field):
                    self.fail(f"{tok.text} of a derivation", tok)
                if tok.text == "conj":
                    return inner.conjugate()
                return inner.real_part() if tok.text == "Re" else inner.imag_part()
            if tok.text == "i":
                return Poly.const(t, I)
            if tok.text == "sqrt2":
                return Poly.const(t, SQRT2)
            if tok.text not in t or (self.allowed is not None and tok.text not in self.allowed):
                raise ParseError(f"unknown variable {tok.text!r}", tok.pos, self.text)
            return Poly.var(t, tok.text)
        self.fail("expected a number, variable, derivation or '('")

    # value arithmetic
    def _add(self, a, b, sign, op):
        fa, fb = isinstance(a, _Field), isinstance(b, _Field)
        if fa and fb:
            return a.combine(b, sign)
        if fa or fb:
            # a zero polynomial may be added to a field
            p = b if fa else a
            if p.is_zero():
                return a if fa else (b if sign > 0 else b.scale(Poly.const(self.table, -1)))
            self.fail("cannot add a polynomial and a derivation", op)
        return a + b if sign > 0 else a - b

    def _mul(self, a, b, op):
        fa, fb = isinstance(a, _Field), isinstance(b, _Field)
        if fa and fb:
            self.fail("cannot multiply two derivations", op)
        if fa:
            return a.scale(b)
        if fb:
            return b.scale(a)
        return a * b

    def _div(self, a, b, op):
        if isinstance(b, _Field) or not b.is_constant():
            self.fail("division is only allowed by nonzero constants", op)
        c = b.constant_value()
        if c.is_zero():
            raise ParseError("division by zero", op.pos, self.text)
        inv = Poly.const(self.table, ExactScalar(1) / c)
        return a.scale(inv) if isinstance(a, _Field) else a * inv


def _parser(text, table, allowed):
    if not isinstance(text, str):
        raise TypeError("expected text")
    return _Parser(text, table or STANDARD, allowed)


def parse_poly(text: str, table: VarTable | None = None, allowed=None) -> Poly:
    p = _parser(text, table, allowed)
    v = p.expr()
    p.finish()
    if isinstance(v, _Field):
        raise ParseError("expected a polynomial, got a derivation", 0, text)
    return v


def parse_scalar(text: str) -> ExactScalar:
    """A constant expression such as ``1/2*sqrt2*i``."""
    v = parse_poly(text)
    if not v.is_constant():
        raise ParseError("expected a constant", 0, text)
    return v.constant_value()


def _coords_for(names, table: VarTable, coords):
    if coords is not None:
        return tuple(coords)
    systems = [s for s in table.coordinate_systems if set(names) <= set(s)]
    if not systems:
        raise ParseError(f"derivations {sorted(names)} do not share a coordinate system")
    return systems[0]


def parse_field(text: str, table: VarTable | None = None, coords: Sequence[str] | None = None,
                allowed=None) -> HoloVField:
    """A holomorphic field ``sum f_j * d/dz_j``; conjugates in coefficients are rejected."""
    p = _parser(text, table, allowed)
    v = p.expr()
    p.finish()
    t = p.table
    if not isinstance(v, _Field):
        if v.is_zero() and coords is not None:
            return HoloVField.zero(t, coords)
        raise ParseError("expected a field such as 'f*d/dz'", 0, text)
    cs = _coords_for(v.parts, t, coords)
    return HoloVField.from_dict(t, cs, v.parts)


def _split_top(text: str, seps=",;") -> list[str]:
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch in seps and depth == 0:
            parts.append(text[start:k])
            start = k + 1
    parts.append(text[start:])
    return parts


def parse_map(text: str, src: Sequence[str], dst: Sequence[str], table: VarTable | None = None,
              inverse: str | None = None, name: str = "") -> PolyMap:
    """Three component expressions in ``src`` coordinates, separated by ',' or ';'.

    Components may be labelled: ``"w2 = z2 + i*z1^2"``.  An ``inverse`` text
    in ``dst`` coordinates is verified exactly.
    """
    t = table or STANDARD

    def comps(txt, frm, to):
        body = txt.strip()
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1]
        items = _split_top(body)
        if len(items) != len(to):
            raise ParseError(f"expected {len(to)} components, got {len(items)}", 0, txt)
        out = {}
        for k, item in enumerate(items):
            if "=" in item:
                lhs, rhs = item.split("=", 1)
                lhs = lhs.strip()
                if lhs not in to:
                    raise ParseError(f"{lhs!r} is not a target coordinate", 0, txt)
            else:
                lhs, rhs = to[k], item
            if lhs in out:
                raise ParseError(f"component {lhs!r} given twice", 0, txt)
            out[lhs] = parse_poly(rhs, t, allowed=_map_allowed(t, frm))
        return [out[c] for c in to]

    fwd = comps(text, src, dst)
    inv = comps(inverse, dst, src) if inverse else None
    return PolyMap(t, tuple(src), tuple(dst), fwd, inv, name=name)


def _map_allowed(t: VarTable, coords):
    return set(coords) | {n for n in t.names if t.kind(n) == PARAM}


def session_table(names: Sequence[str] | None = None,
                  weights: Mapping[str, int] | None = None) -> tuple[VarTable, set | None]:
    """Variable universe for a command line session.

    Without ``names`` the standard table is used.  Names already in the
    standard table restrict the session; unknown names become formal
    parameters of an extended table.  ``weights`` regrade coordinates.
    """
    if not names and not weights:
        return STANDARD, None
    base = STANDARD
    extra = [n for n in (names or ()) if n not in base]
    if extra or weights:
        coords = {n: (weights or {}).get(n, base.weight(n))
                  for n in base.names if base.kind(n) == COMPLEX}
        reals = {n: base.var(n).real_of for n in base.names if base.kind(n) == REAL}
        params = [n for n in base.names if base.kind(n) == PARAM and base.conj_name(n) == n]
        paired = [(n, base.conj_name(n)) for n in base.names
                  if base.kind(n) == PARAM and base.conj_name(n) != n and n < base.conj_name(n)]
        for n in extra:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                raise ParseError(f"bad variable name {n!r}")
        base = VarTable.build(coords, reals, params + extra, paired, base.coordinate_systems)
    allowed = None
    if names:
        allowed = set(names)
        for n in list(allowed):
            if base.kind(n) == COMPLEX:
                allowed.add(base.conj_name(n))
    return base, allowed
