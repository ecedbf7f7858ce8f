"""Graded infinitesimal automorphisms of hypersurfaces given by a chart."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import linalg
from .cr import Hypersurface, SurfaceError, chart_pullback, clearing_power
from .lie import HoloVField, bracket, lie_derivative, real_span_coords
from .poly import Poly, VarTable
from .scalar import I, ONE

__all__ = [
    "weight_ansatz", "GradedComponent", "graded_stabilizer",
    "bracket_closure_check", "vanishing_certified",
]


def _monomials_of_weight(names: Sequence[str], weights: Sequence[int], W: int) -> list:
    """Exponent tuples ``a`` with ``sum a_k * weights[k] == W``."""
    if W < 0:
        return []
    out = []

    def rec(k, left, acc):
        if k == len(names):
            if left == 0:
                out.append(tuple(acc))
            return
        w = weights[k]
        for e in range(left // w + 1):
            rec(k + 1, left - e * w, acc + [e])

    rec(0, W, [])
    return sorted(out, reverse=True)


def _field_weights(table: VarTable, coords, weights: Mapping[str, int] | None) -> list[int]:
    w = [table.weight(c) for c in coords]
    if weights:
        w = [weights.get(c, x) for c, x in zip(coords, w)]
    if any(x <= 0 for x in w):
        raise ValueError("coordinate weights must be positive")
    return w


def weight_ansatz(table: VarTable, coords: Sequence[str], k: int,
                  weights: Mapping[str, int] | None = None) -> list[HoloVField]:
    """Monomial fields ``z^a d/dz_j`` of weight ``k`` (monomial weight minus ``[z_j]``)."""
    coords = tuple(coords)
    w = _field_weights(table, coords, weights)
    out = []
    for j, c in enumerate(coords):
        for exp in _monomials_of_weight(coords, w, k + w[j]):
            m = Poly.monomial(table, dict(zip(coords, exp)))
            parts = [Poly.zero(table)] * len(coords)
            parts[j] = m
            out.append(HoloVField(table, coords, parts))
    return out


@dataclass
class GradedComponent:
    weight: int
    basis: list = field(default_factory=list)
    ansatz_size: int = 0

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {"weight": self.weight, "dimension": self.dimension,
                "ansatz_fields": self.ansatz_size,
                "basis": [str(X) for X in self.basis]}


def _check_chart(M: Hypersurface):
    if M.chart is None:
        raise SurfaceError(f"{M.name} has no chart")
    D = M.chart.denominator
    if D is not None and len(D.terms) != 1:
        raise SurfaceError(f"{M.name}: chart denominator {D} is not a monomial")
    if M.params:
        raise SurfaceError(f"{M.name}: specialize the formal parameters first")


def graded_stabilizer(M: Hypersurface, k_min: int = -3, k_max: int = 5,
                      weights: Mapping[str, int] | None = None,
                      shuffle_seed: int | None = None) -> list[GradedComponent]:
    """Weight components of the tangent holomorphic polynomial fields.

    Every monomial field gets two real unknowns (coefficients ``1`` and ``i``);
    tangency on the chart gives a homogeneous real linear system whose exact
    nullspace is the component.  ``shuffle_seed`` permutes the unknowns,
    which must not change the dimensions.
    """
    _check_chart(M)
    table = M.table
    comps = []
    for k in range(k_min, k_max + 1):
        ansatz = weight_ansatz(table, M.coords, k, weights)
        slots = [(X, c) for X in ansatz for c in (ONE, I)]
        if shuffle_seed is not None:
            random.Random(shuffle_seed + k).shuffle(slots)
        raw = [[lie_derivative(X.scale(c), rho) for rho in M.rhos] for X, c in slots]
        powers = [clearing_power([col[r] for col in raw], M.chart) for r in range(len(M.rhos))]
        columns = [[chart_pullback(p, M.chart, m) for p, m in zip(col, powers)] for col in raw]
        rows: dict = {}
        for s, polys in enumerate(columns):
            for r, p in enumerate(polys):
                for e, v in p.terms.items():
                    rows.setdefault((r, e), {})[s] = v
        null = linalg.nullspace(list(rows.values()), list(range(len(slots))))
        basis = []
        for v in null:
            Y = HoloVField.zero(table, M.coords)
            for s, coef in v.items():
                X, c = slots[s]
                Y = Y + X.scale(c * coef)
            basis.append(Y)
        comps.append(GradedComponent(k, basis, len(ansatz)))
    return comps


def bracket_closure_check(components: Sequence[GradedComponent], detail: list | None = None) -> bool:
    """``[t_i, t_j]`` lies in the computed ``t_{i+j}`` (a missing weight counts as zero)."""
    by_weight = {c.weight: c for c in components}
    ok = True
    comps = sorted(components, key=lambda c: c.weight)
    for a in range(len(comps)):
        for b in range(a, len(comps)):
            ca, cb = comps[a], comps[b]
            target = by_weight.get(ca.weight + cb.weight)
            for X in ca.basis:
                for Y in cb.basis:
                    Z = bracket(X, Y)
                    if Z.is_zero():
                        continue
                    if target is None or not target.basis:
                        good = False
                    else:
                        good = real_span_coords(target.basis, Z) is not None
                    if not good:
                        ok = False
                        if detail is not None:
                            detail.append((ca.weight, cb.weight, str(Z)))
                        else:
                            return False
    return ok


def vanishing_certified(components: Sequence[GradedComponent], run: int = 3) -> bool:
    """Three consecutive zero components at positive weight end the induction."""
    streak = 0
    for c in sorted(components, key=lambda c: c.weight):
        if c.weight < 1:
            continue
        streak = streak + 1 if c.dimension == 0 else 0
        if streak >= run:
            return True
    return False
