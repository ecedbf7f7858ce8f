"""Real hypersurfaces in C^3: tangency, relative invariants, Levi forms, ranks."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

from . import linalg
from .lie import HoloVField, PolyMap, lie_derivative, realify
from .poly import REAL_NAMES, NotDivisible, Poly, VarTable
from .scalar import I, ONE, ZERO, ExactScalar, format_scalar

__all__ = [
    "Chart", "chart_pullback", "clearing_power", "Hypersurface", "SurfaceError",
    "tangency_chart", "tangency_divisibility", "relative_invariant_check", "orbit_preserved",
    "LeviReport", "levi_at", "field_rank_at", "holomorphic_degeneracy_search",
    "DegeneracyResult", "point_from_reals", "point_reals", "ORIENTATION_ORDER",
]

# derivative used to orient the defining function, in order of preference
ORIENTATION_ORDER = ("y3", "y2", "y1", "x3", "x2", "x1")


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    """Real variables expressed through the remaining (free) ones.

    ``images[v] / denominator`` replaces the real coordinate ``v``.
    """

    images: Mapping[str, Poly]
    denominator: Poly | None = None

    def free_names(self) -> tuple[str, ...]:
        return tuple(n for n in REAL_NAMES if n not in self.images)


def chart_pullback(f: Poly, chart: Chart, power: int | None = None) -> Poly:
    """``D^m * f(chart)``; ``m`` defaults to the degree of ``f`` in the charted variables.

    Linear systems must pass one common ``power`` for all their columns.
    """
    names = list(chart.images)
    D = chart.denominator
    if D is None:
        return f.substitute(dict(chart.images))
    deg = f.degree(names)
    m = deg if power is None else power
    if deg > m:
        raise ValueError("clearing power below the degree in the charted variables")
    if f.is_zero():
        return f
    Dpow = [Poly.const(f.table, 1)]
    for _ in range(m):
        Dpow.append(Dpow[-1] * D)
    out = Poly.zero(f.table)
    cache: dict = {}
    for exps, coef in f.coefficients_in(names).items():
        term = coef * Dpow[m - sum(exps)]
        for name, e in zip(names, exps):
            if e:
                key = (name, e)
                if key not in cache:
                    cache[key] = chart.images[name] ** e
                term = term * cache[key]
        out = out + term
    return out


def clearing_power(polys, chart: Chart) -> int:
    names = list(chart.images)
    return max([p.degree(names) for p in polys] + [0])


@dataclass
class Hypersurface:
    """Zero set of real polynomials in x1..y3, read in the given coordinates."""

    name: str
    rhos: tuple
    coords: tuple = ("z1", "z2", "z3")
    chart: Chart | None = None
    constraints: tuple = ()
    params: tuple = ()
    note: str = ""

    def __post_init__(self):
        self.rhos = tuple(self.rhos)
        self.coords = tuple(self.coords)
        for rho in self.rhos:
            if rho != rho.conjugate():
                raise SurfaceError(f"{self.name}: defining polynomial is not real")
            stray = {v for v in rho.variables() if v not in REAL_NAMES and v not in self.params}
            if stray:
                raise SurfaceError(f"{self.name}: undeclared variables {sorted(stray)}")
        if self.chart is not None:
            for rho in self.rhos:
                if chart_pullback(rho, self.chart):
                    raise SurfaceError(f"{self.name}: chart does not parametrize the surface")

    @property
    def rho(self) -> Poly:
        if len(self.rhos) != 1:
            raise SurfaceError(f"{self.name} has codimension {len(self.rhos)}")
        return self.rhos[0]

    @property
    def table(self) -> VarTable:
        return self.rhos[0].table

    @property
    def codim(self) -> int:
        return len(self.rhos)

    def specialize(self, values: Mapping[str, object]) -> "Hypersurface":
        """Fix formal parameters to numbers (exact scalars)."""
        chart = None
        if self.chart is not None:
            D = self.chart.denominator
            chart = Chart({k: v.evaluate(values) for k, v in self.chart.images.items()},
                          D.evaluate(values) if D is not None else None)
        label = ",".join(f"{k}={format_scalar(ExactScalar.coerce(v))}" for k, v in values.items())
        return Hypersurface(f"{self.name}[{label}]", [r.evaluate(values) for r in self.rhos],
                            self.coords, chart, self.constraints,
                            tuple(p for p in self.params if p not in values), self.note)

    def contains(self, point) -> bool:
        vals = point_reals(point)
        return all(r.evaluate(vals).is_zero() for r in self.rhos)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rho": [str(r) for r in self.rhos],
            "coords": list(self.coords),
            "chart": None if self.chart is None else {
                "images": {k: str(v) for k, v in self.chart.images.items()},
                "denominator": None if self.chart.denominator is None else str(self.chart.denominator),
            },
            "constraints": list(self.constraints),
            "params": list(self.params),
        }


# -- points ----------------------------------------------------------------------

def point_from_reals(values: Sequence) -> tuple:
    """Six reals ``x1, y1, x2, y2, x3, y3`` to three complex scalars."""
    v = [ExactScalar.coerce(x) for x in values]
    if len(v) != 6:
        raise ValueError("a point needs six real coordinates")
    return tuple(v[2 * k] + v[2 * k + 1] * I for k in range(3))


def point_reals(point) -> dict:
    if isinstance(point, Mapping):
        return {k: ExactScalar.coerce(v) for k, v in point.items()}
    pts = [ExactScalar.coerce(c) for c in point]
    if len(pts) == 6:
        pts = list(point_from_reals(pts))
    out = {}
    for k, c in enumerate(pts):
        out[REAL_NAMES[2 * k]] = c.real()
        out[REAL_NAMES[2 * k + 1]] = c.imag()
    return out


def _value(f: Poly, vals: Mapping[str, ExactScalar]) -> ExactScalar:
    r = f.evaluate(vals)
    if not r.is_constant():
        raise SurfaceError(f"free variables {sorted(r.variables())} remain after evaluation")
    return r.constant_value()


# -- tangency ----------------------------------------------------------------------

def _check_coords(X: HoloVField, M: Hypersurface):
    if X.coords != M.coords:
        raise SurfaceError(f"field on {X.coords} but {M.name} is read in {M.coords}")


def tangency_chart(X: HoloVField, M: Hypersurface) -> bool:
    """All Lie derivatives of the defining functions vanish on the chart."""
    _check_coords(X, M)
    if M.chart is None:
        raise SurfaceError(f"{M.name} has no chart")
    return all(chart_pullback(lie_derivative(X, rho), M.chart).is_zero() for rho in M.rhos)


def tangency_divisibility(X: HoloVField, M: Hypersurface) -> bool:
    """``rho`` divides ``(2 Re X) rho`` (parameters count as variables)."""
    _check_coords(X, M)
    rho = M.rho
    try:
        lie_derivative(X, rho).divide_exact(rho)
    except NotDivisible:
        return False
    return True


def relative_invariant_check(P: Poly, action: PolyMap, weight: int, carrier: str = "lam") -> bool:
    """``P o action == carrier^weight * P`` as a polynomial identity."""
    lhs = action.pull_real(P)
    return lhs == Poly.var(P.table, carrier) ** weight * P


def orbit_preserved(M: Hypersurface, action: PolyMap) -> bool:
    """Every member of the family maps into the family.

    For a single defining function, ``rho o action`` must be ``rho`` times a
    factor free of coordinates.  Higher codimension is checked on the chart.
    """
    if M.codim == 1:
        try:
            q = action.pull_real(M.rho).divide_exact(M.rho)
        except NotDivisible:
            return False
        return not (set(q.variables()) & set(REAL_NAMES)) and not q.is_zero()
    if M.chart is None:
        raise SurfaceError(f"{M.name} has no chart")
    return all(chart_pullback(action.pull_real(r), M.chart).is_zero() for r in M.rhos)


# -- Levi form -----------------------------------------------------------------

@dataclass
class LeviReport:
    point: tuple
    gradient: tuple
    tangent: tuple
    matrix: tuple
    signature: tuple
    determinant: ExactScalar
    orientation: str

    @property
    def rank(self) -> int:
        return 2 - self.signature[2]

    def to_json(self) -> dict:
        return {
            "point": [format_scalar(c) for c in self.point],
            "gradient": [format_scalar(c) for c in self.gradient],
            "tangent": [[format_scalar(c) for c in v] for v in self.tangent],
            "matrix": [[format_scalar(c) for c in row] for row in self.matrix],
            "signature": list(self.signature),
            "determinant": format_scalar(self.determinant),
            "orientation": self.orientation,
        }


def hermitian_signature(H) -> tuple[int, int, int]:
    """Inertia of a 2x2 Hermitian matrix from exact signs of det and trace."""
    (a, b), (c, d) = H
    if a.conjugate() != a or d.conjugate() != d or b.conjugate() != c:
        raise ValueError("matrix is not Hermitian")
    det = (a * d - b * c).real()
    tr = (a + d).real()
    sd, st = det.sign(), tr.sign()
    if sd > 0:
        return (2, 0, 0) if st > 0 else (0, 2, 0)
    if sd < 0:
        return (1, 1, 0)
    if st > 0:
        return (1, 0, 1)
    if st < 0:
        return (0, 1, 1)
    return (0, 0, 2)


def levi_at(M: Hypersurface, point) -> LeviReport:
    """Levi form of ``M`` at an exact point, with fixed orientation.

    The defining function is oriented so that the first nonzero derivative in
    ``ORIENTATION_ORDER`` is positive.
    """
    if M.codim != 1:
        raise SurfaceError("the Levi form is computed for hypersurfaces only")
    rho = M.rho
    vals = point_reals(point)
    pt = tuple(vals[REAL_NAMES[2 * k]] + vals[REAL_NAMES[2 * k + 1]] * I for k in range(3))
    if not _value(rho, vals).is_zero():
        raise SurfaceError(f"point is not on {M.name}")
    first = {n: _value(rho.diff(n), vals) for n in REAL_NAMES}
    if all(v.is_zero() for v in first.values()):
        raise SurfaceError(f"{M.name} is singular at the point (zero gradient)")
    sign = 0
    used = None
    for n in ORIENTATION_ORDER:
        sign = first[n].sign()
        if sign:
            used = n
            break
    orientation = f"d rho/d {used} {'>' if sign > 0 else '<'} 0" + ("" if sign > 0 else "; rho negated")
    half = ExactScalar(1, 0) / 2
    grad = tuple((first[REAL_NAMES[2 * k]] - first[REAL_NAMES[2 * k + 1]] * I) * half * sign
                 for k in range(3))
    quarter = ExactScalar(1, 0) / 4
    hess = [[None] * 3 for _ in range(3)]
    for j in range(3):
        xj, yj = REAL_NAMES[2 * j], REAL_NAMES[2 * j + 1]
        for k in range(3):
            xk, yk = REAL_NAMES[2 * k], REAL_NAMES[2 * k + 1]
            re = _value(rho.diff(xj).diff(xk) + rho.diff(yj).diff(yk), vals)
            im = _value(rho.diff(xj).diff(yk) - rho.diff(yj).diff(xk), vals)
            hess[j][k] = (re + im * I) * quarter * sign
    piv = max(k for k in range(3) if grad[k])
    tangent = []
    for k in range(3):
        if k == piv:
            continue
        v = [ZERO, ZERO, ZERO]
        v[k] = ONE
        v[piv] = -grad[k] / grad[piv]
        tangent.append(tuple(v))
    H = [[sum((hess[j][k] * ta[j] * tb[k].conjugate() for j in range(3) for k in range(3)), ZERO)
          for tb in tangent] for ta in tangent]
    sig = hermitian_signature(H)
    det = (H[0][0] * H[1][1] - H[0][1] * H[1][0]).real()
    return LeviReport(pt, grad, tuple(tangent), tuple(tuple(r) for r in H), sig, det, orientation)


# -- ranks -------------------------------------------------------------------------

def field_rank_at(fields: Sequence[HoloVField], point) -> int:
    """Real rank of the values of ``2 Re X`` at ``point``."""
    if not fields:
        return 0
    vals = point_reals(point)
    pt = [vals[REAL_NAMES[2 * k]] + vals[REAL_NAMES[2 * k + 1]] * I for k in range(3)]
    vecs = []
    for X in fields:
        at = dict(zip(X.coords, pt))
        v = {}
        for j, f in enumerate(X.coeffs):
            c = _value(f, at) if f else ZERO
            if c.real():
                v[2 * j] = c.real()
            if c.imag():
                v[2 * j + 1] = c.imag()
        vecs.append(v)
    return linalg.rank(vecs)


# -- holomorphic degeneracy ------------------------------------------------------

@dataclass
class DegeneracyResult:
    surface: str
    degree_bound: int
    method: str
    fields: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.fields)

    @property
    def degenerate(self) -> bool:
        return bool(self.fields)

    def to_json(self) -> dict:
        return {"surface": self.surface, "degree_bound": self.degree_bound,
                "method": self.method, "dimension": self.dimension,
                "fields": [str(X) for X in self.fields]}


def _monomials(names: Sequence[str], max_degree: int):
    out = []
    for d in range(max_degree + 1):
        out.extend(combinations_with_replacement(names, d))
    return out


def _mono(table: VarTable, combo) -> Poly:
    p = Poly.const(table, 1)
    for n in combo:
        p = p * Poly.var(table, n)
    return p


def _row_system(columns: Sequence[Poly]) -> list[dict]:
    rows: dict = {}
    for k, col in enumerate(columns):
        for e, c in col.terms.items():
            rows.setdefault(e, {})[k] = c
    return list(rows.values())


def holomorphic_degeneracy_search(M: Hypersurface, degree_bound: int,
                                  method: str = "ideal") -> DegeneracyResult:
    """Holomorphic fields of degree <= bound lying in the complex tangent of ``M``.

    The condition is ``sum_j f_j * d rho/d z_j = 0`` on ``M``:

    * ``method="ideal"``: it equals ``c * rho`` for a cofactor ``c`` of degree
      below ``degree_bound`` in the real coordinates;
    * ``method="chart"``: it vanishes after substituting the chart.

    Returns a basis (over C) of the admissible coefficient fields.
    """
    if M.params:
        raise SurfaceError(f"{M.name}: specialize the formal parameters first")
    rho = M.rho
    t = rho.table
    half = ExactScalar(1, 0) / 2
    drho = [(rho.diff(REAL_NAMES[2 * k]) - rho.diff(REAL_NAMES[2 * k + 1]).scale(I)).scale(half)
            for k in range(3)]
    monos = _monomials(M.coords, degree_bound)
    unknowns = [(j, m) for j in range(3) for m in monos]
    real_monos = {m: realify(_mono(t, m), M.coords) for m in monos}
    cols = [real_monos[m] * drho[j] for j, m in unknowns]
    if method == "ideal":
        cof = _monomials(REAL_NAMES, degree_bound - 1) if degree_bound >= 1 else []
        cols = cols + [-(_mono(t, m) * rho) for m in cof]
    elif method == "chart":
        if M.chart is None:
            raise SurfaceError(f"{M.name} has no chart")
        m = clearing_power(cols, M.chart)
        cols = [chart_pullback(c, M.chart, m) for c in cols]
    else:
        raise ValueError(f"unknown method {method!r}")
    ncols = len(cols)
    null = linalg.nullspace(_row_system(cols), list(range(ncols)))
    nf = len(unknowns)
    eb = linalg.EchelonBasis()
    fields = []
    for v in null:
        proj = {k: c for k, c in v.items() if k < nf}
        if proj and eb.add(proj):
            parts = [Poly.zero(t)] * 3
            for k, c in proj.items():
                j, m = unknowns[k]
                parts[j] = parts[j] + _mono(t, m).scale(c)
            fields.append(HoloVField(t, M.coords, parts))
    return DegeneracyResult(M.name, degree_bound, method, fields)
