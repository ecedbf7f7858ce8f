"""Exact sparse Gaussian elimination over Q(i)[sqrt2].

Vectors are dicts ``{column: ExactScalar}`` with zero entries omitted.  The
field has exact division, so plain elimination is used: entries never grow
in floating error and the reduced echelon form is canonical.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalar import ONE, ExactScalar

Vector = dict


def _axpy(target: dict, c: ExactScalar, src: dict) -> None:
    """target += c * src, in place, dropping zeros."""
    for k, v in src.items():
        s = target.get(k)
        s = c * v if s is None else s + c * v
        if s.is_zero():
            target.pop(k, None)
        else:
            target[k] = s


class EchelonBasis:
    """Incrementally maintained reduced row echelon basis of a span.

    Columns are compared by the ``order`` key (default: natural ordering),
    so that pivots are deterministic.
    """

    def __init__(self, order=None):
        self.rows: dict = {}  # pivot column -> row (pivot entry == 1)
        self._order = order

    def _pivot_of(self, v: dict):
        return min(v, key=self._order) if self._order else min(v)

    def reduce(self, v: dict) -> dict:
        # stored rows are fully reduced, so subtracting one never
        # reintroduces another pivot column
        v = dict(v)
        for p in [q for q in v if q in self.rows]:
            _axpy(v, -v[p], self.rows[p])
        return v

    def add(self, v: dict) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = self._pivot_of(r)
        inv = ONE / r[p]
        r = {k: x * inv for k, x in r.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c is not None:
                _axpy(row, -c, r)
        self.rows[p] = r
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(vectors: Iterable[dict]) -> int:
    eb = EchelonBasis()
    for v in vectors:
        eb.add(v)
    return eb.rank


def nullspace(rows: Iterable[dict], columns: Sequence) -> list[dict]:
    """Basis of ``{x : row . x = 0 for every row}`` over the given columns.

    The basis is the canonical one attached to the free columns of the
    reduced echelon form, so it does not depend on row order.
    """
    pos = {c: k for k, c in enumerate(columns)}
    eb = EchelonBasis(order=pos.__getitem__)
    for r in rows:
        if r:
            unknown = set(r) - set(pos)
            if unknown:
                raise KeyError(f"row mentions unknown columns {sorted(map(str, unknown))}")
            eb.add(r)
    pivots = set(eb.rows)
    basis = []
    for f in columns:
        if f in pivots:
            continue
        v = {f: ONE}
        for p, row in eb.rows.items():
            c = row.get(f)
            if c is not None:
                v[p] = -c
        basis.append(v)
    return basis


def solve(rows: Sequence[dict], rhs: Sequence[ExactScalar], columns: Sequence):
    """One solution of ``rows . x = rhs`` or ``None`` when inconsistent."""
    marker = object()
    aug_cols = list(columns) + [marker]
    pos = {c: k for k, c in enumerate(aug_cols)}
    eb = EchelonBasis(order=pos.__getitem__)
    for r, b in zip(rows, rhs):
        row = dict(r)
        b = ExactScalar.coerce(b)
        if not b.is_zero():
            row[marker] = -b
        if row:
            eb.add(row)
    if marker in eb.rows:
        return None
    x = {}
    for p, row in eb.rows.items():
        c = row.get(marker)
        if c is not None:
            x[p] = -c
    return x


def in_span(vectors: Iterable[dict], v: dict) -> bool:
    eb = EchelonBasis()
    for w in vectors:
        eb.add(w)
    return eb.contains(v)


def express(vectors: Sequence[dict], v: dict):
    """Coefficients ``c`` with ``sum c_k vectors[k] == v``, or ``None``."""
    cols = sorted({k for w in vectors for k in w} | set(v), key=repr)
    rows = []
    rhs = []
    for col in cols:
        rows.append({k: w[col] for k, w in enumerate(vectors) if col in w})
        rhs.append(v.get(col, ExactScalar(0)))
    sol = solve(rows, rhs, list(range(len(vectors))))
    if sol is None:
        return None
    return [sol.get(k, ExactScalar(0)) for k in range(len(vectors))]
