"""Numerical flows of holomorphic fields in R^6 and the orbit invariants P, Q.

States are float arrays of shape ``(..., 6)`` ordered ``x1, y1, x2, y2, x3, y3``
in whatever coordinate system the field lives in.  The real field ``2 Re X``
moves ``(x_k, y_k)`` with velocity ``(Re f_k, Im f_k)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .catalog import AMBIENT, P_INVARIANT, Q_INVARIANT, TUBE, make_map
from .lie import HoloVField
from .poly import REAL_NAMES, Poly
from .scalar import ExactScalar

__all__ = [
    "FlowError", "Trajectory", "OrbitClass", "Drift", "compile_poly", "compile_field",
    "invariants_for", "integrate_flow", "rk4_exact", "summary_json", "integrate_batch",
    "invariant_drift",
    "batch_ratio_drift", "classify_point", "random_starts", "trajectory_csv",
    "trajectory_summary", "FLOW_SCHEMA", "CSV_COLUMNS", "ZERO_TOL",
]

FLOW_SCHEMA = "crmodel.flow/1"
CSV_COLUMNS = ("t",) + REAL_NAMES + ("P", "Q", "mu2")
ZERO_TOL = 1e-12


class FlowError(FloatingPointError):
    def __init__(self, step: int, message: str = "state became nonfinite"):
        super().__init__(f"{message} at step {step}")
        self.step = step


def compile_poly(f: Poly, names: Sequence[str]):
    """Numpy evaluator ``F(values)`` for a polynomial in ``names``.

    ``values`` has trailing axis ``len(names)``; the result is complex.
    """
    table = f.table
    idx = [table.index[n] for n in names]
    stray = set(f.variables()) - set(names)
    if stray:
        raise ValueError(f"cannot evaluate numerically: free variables {sorted(stray)}")
    terms = [(complex(c), tuple(e[i] for i in idx)) for e, c in f.terms.items()]

    def F(values):
        values = np.asarray(values)
        out = np.zeros(values.shape[:-1], dtype=complex)
        for coef, exps in terms:
            t = np.full(values.shape[:-1], coef, dtype=complex)
            for k, e in enumerate(exps):
                if e:
                    t = t * values[..., k] ** e
            out = out + t
        return out

    return F


def compile_field(X: HoloVField):
    """Velocity of ``2 Re X`` as a function of real states ``(..., 6)``."""
    fns = [compile_poly(c, X.coords) for c in X.coeffs]

    def rhs(state):
        z = state[..., 0::2] + 1j * state[..., 1::2]
        out = np.empty(state.shape, dtype=float)
        for k, F in enumerate(fns):
            v = F(z)
            out[..., 2 * k] = v.real
            out[..., 2 * k + 1] = v.imag
        return out

    return rhs


_INVARIANTS: dict = {}


def invariants_for(coords: Sequence[str]) -> tuple[Poly, Poly]:
    """``(P, Q)`` written in the real coordinates of ``coords``.

    Tube coordinates see the invariants pulled back through the tube-to-ambient map.
    """
    coords = tuple(coords)
    if coords not in _INVARIANTS:
        if coords == AMBIENT:
            _INVARIANTS[coords] = (P_INVARIANT, Q_INVARIANT)
        elif coords == TUBE:
            F = make_map("tube_to_ambient")
            _INVARIANTS[coords] = (F.pull_real(P_INVARIANT), F.pull_real(Q_INVARIANT))
        else:
            raise ValueError(f"no invariants for coordinates {coords}")
    return _INVARIANTS[coords]


def _real_eval(f: Poly):
    F = compile_poly(f, REAL_NAMES)
    return lambda s: F(s).real


@dataclass
class Trajectory:
    field: str
    coords: tuple
    start: np.ndarray
    h: float
    times: np.ndarray
    states: np.ndarray
    integrator: str = "rk4"

    def __len__(self):
        return len(self.times)

    @property
    def end(self) -> np.ndarray:
        return self.states[-1]

    def invariants(self) -> tuple[np.ndarray, np.ndarray]:
        P, Q = invariants_for(self.coords)
        return _real_eval(P)(self.states), _real_eval(Q)(self.states)


def rk4_exact(X: HoloVField) -> bool:
    """True when classical RK4 has no truncation error for ``X``.

    For a weight-homogeneous field of weight ``k < 0`` the order ``m``
    elementary differentials have weight ``[z_j] + m k``; with coordinate
    weights at most 3 all of order 4 and higher vanish, so the Taylor
    expansion that RK4 matches is the whole flow.
    """
    lo_hi = X.weight_interval()
    if lo_hi is None:
        return True
    lo, hi = lo_hi
    if lo != hi or lo >= 0:
        return False
    top = max(X.table.weight(c) for c in X.coords)
    return top + 4 * lo < 0


def _steps(T: float, h: float) -> int:
    if not h > 0:
        raise ValueError("step size must be positive")
    if T < 0:
        raise ValueError("duration must be nonnegative")
    return int(round(T / h))


def _rk4(rhs, y0: np.ndarray, h: float, n: int, keep: bool):
    y = np.array(y0, dtype=float)
    out = [y.copy()] if keep else None
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, n + 1):
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * h * k1)
            k3 = rhs(y + 0.5 * h * k2)
            k4 = rhs(y + h * k3)
            y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(y)):
                raise FlowError(step)
            if keep:
                out.append(y.copy())
    return (np.array(out) if keep else y)


def integrate_flow(X: HoloVField, start, T: float, h: float = 1e-3) -> Trajectory:
    """Fixed-step classical Runge-Kutta for ``2 Re X``.

    The run takes ``round(T / h)`` steps, so samples sit exactly ``h`` apart
    and the last time is the multiple of ``h`` nearest to ``T``.
    """
    n = _steps(T, h)
    y0 = np.asarray(start, dtype=float)
    if y0.shape != (6,):
        raise ValueError("a start point needs six real coordinates")
    states = _rk4(compile_field(X), y0, h, n, keep=True)
    return Trajectory(str(X), X.coords, y0, h, np.arange(n + 1) * h, states)


def integrate_batch(X: HoloVField, starts, T: float, h: float = 1e-3) -> np.ndarray:
    """Final states for many starts at once, shape ``(n_starts, 6)``."""
    return _rk4(compile_field(X), np.asarray(starts, dtype=float), h, _steps(T, h), keep=False)


def _rel(values: np.ndarray, ref) -> float:
    ref = np.asarray(ref)
    scale = np.maximum(np.abs(ref), np.finfo(float).tiny)
    return float(np.max(np.abs(values - ref) / scale))


@dataclass
class Drift:
    """Largest relative deviation from the start value; ``None`` when undefined."""

    P: float | None
    Q: float | None
    mu2: float | None
    min_abs_P: float = math.inf
    flagged: bool = False

    def to_json(self) -> dict:
        return {"P": self.P, "Q": self.Q, "mu2": self.mu2,
                "min_abs_P": self.min_abs_P, "flagged": self.flagged}


def _mu2(P, Q):
    return Q * Q / np.abs(P) ** 3


def invariant_drift(traj: Trajectory, flag_below: float = 1e-6) -> Drift:
    """Relative drift of ``P``, ``Q`` and ``Q^2/|P|^3`` along a trajectory.

    If ``P`` vanishes at the start only the drift of ``Q`` is reported.  The
    trajectory is flagged when ``|P|`` drops below ``flag_below``, where the
    ratio is badly conditioned.
    """
    P, Q = traj.invariants()
    min_p = float(np.min(np.abs(P)))
    dq = _rel(Q, Q[0]) if Q[0] != 0 else float(np.max(np.abs(Q)))
    if abs(P[0]) <= ZERO_TOL:
        return Drift(None, dq, None, min_p, True)
    m = _mu2(P, Q)
    return Drift(_rel(P, P[0]), dq, _rel(m, m[0]), min_p, min_p < flag_below)


def batch_ratio_drift(X: HoloVField, starts, T: float = 1.0, h: float = 1e-3) -> np.ndarray:
    """Per-start relative change of ``Q^2/|P|^3`` between time 0 and ``T``."""
    starts = np.asarray(starts, dtype=float)
    P, Q = (_real_eval(f) for f in invariants_for(X.coords))
    end = integrate_batch(X, starts, T, h)
    m0, m1 = _mu2(P(starts), Q(starts)), _mu2(P(end), Q(end))
    return np.abs(m1 - m0) / np.maximum(np.abs(m0), np.finfo(float).tiny)


def random_starts(n: int, seed: int = 0, min_abs_P: float = 0.1, box: float = 1.0,
                  coords: Sequence[str] = AMBIENT) -> np.ndarray:
    """``n`` uniform points of ``[-box, box]^6`` with ``|P| > min_abs_P``."""
    rng = np.random.default_rng(seed)
    P = _real_eval(invariants_for(coords)[0])
    out = []
    while len(out) < n:
        cand = rng.uniform(-box, box, size=(4 * n, 6))
        out.extend(cand[np.abs(P(cand)) > min_abs_P])
    return np.array(out[:n])


# -- classification ------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitClass:
    """Orbit of a point under the model group.

    ``kind`` is ``plus``/``minus`` by the sign of ``P``, else ``cubic`` when
    ``Q = 0`` too and ``complement`` otherwise.
    """

    sign: str
    mu2: float | None
    q_zero: bool | None
    exact: bool

    @property
    def kind(self) -> str:
        if self.sign == "+":
            return "plus"
        if self.sign == "-":
            return "minus"
        return "cubic" if self.q_zero else "complement"

    def same_orbit(self, other: "OrbitClass", rtol: float = 1e-9) -> bool:
        if self.kind != other.kind:
            return False
        if self.mu2 is None or other.mu2 is None:
            return True
        return abs(self.mu2 - other.mu2) <= rtol * max(abs(self.mu2), 1.0)

    def to_json(self) -> dict:
        return {"kind": self.kind, "sign_P": self.sign, "mu2": self.mu2,
                "Q_zero": self.q_zero, "exact": self.exact}


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, ExactScalar)) and not isinstance(x, bool)


def _reals(point) -> list:
    pts = list(point)
    if len(pts) == 3:
        out = []
        for c in pts:
            if isinstance(c, ExactScalar):
                out += [c.real(), c.imag()]
            elif _is_exact(c):
                out += [c, 0]
            else:
                c = complex(c)
                out += [c.real, c.imag]
        return out
    if len(pts) != 6:
        raise ValueError("a point needs three complex or six real coordinates")
    return pts


def classify_point(point, coords: Sequence[str] = AMBIENT, tol: float = ZERO_TOL) -> OrbitClass:
    """Orbit class of a point: exact when every coordinate is rational, else floats with ``tol``."""
    P, Q = invariants_for(coords)
    reals = _reals(point)
    if all(_is_exact(x) for x in reals):
        vals = {n: ExactScalar.coerce(x) for n, x in zip(REAL_NAMES, reals)}
        p, qv = P.evaluate(vals).constant_value(), Q.evaluate(vals).constant_value()
        sp = p.sign()
        if sp == 0:
            return OrbitClass("0", None, qv.is_zero(), True)
        mu = qv * qv / (p * p * p * sp)
        return OrbitClass("+" if sp > 0 else "-", float(complex(mu).real), None, True)
    arr = np.array([float(x) for x in reals])
    p, qv = float(_real_eval(P)(arr)), float(_real_eval(Q)(arr))
    if abs(p) <= tol:
        return OrbitClass("0", None, abs(qv) <= tol, False)
    return OrbitClass("+" if p > 0 else "-", qv * qv / abs(p) ** 3, None, False)


# -- output --------------------------------------------------------------------------

def trajectory_csv(traj: Trajectory, every: int = 1) -> str:
    """CSV with columns ``t, x1, y1, x2, y2, x3, y3, P, Q, mu2``."""
    P, Q = traj.invariants()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for k in range(0, len(traj), every):
        mu = "" if abs(P[k]) <= ZERO_TOL else repr(float(Q[k] ** 2 / abs(P[k]) ** 3))
        w.writerow([repr(float(traj.times[k]))] + [repr(float(x)) for x in traj.states[k]]
                   + [repr(float(P[k])), repr(float(Q[k])), mu])
    return buf.getvalue()


def trajectory_summary(traj: Trajectory) -> dict:
    d = invariant_drift(traj)
    cls = [classify_point(tuple(float(x) for x in s), traj.coords) for s in (traj.start, traj.end)]
    return {
        "schema": FLOW_SCHEMA,
        "field": traj.field,
        "coords": list(traj.coords),
        "integrator": traj.integrator,
        "h": traj.h,
        "steps": len(traj) - 1,
        "T": float(traj.times[-1]),
        "start": [float(x) for x in traj.start],
        "end": [float(x) for x in traj.end],
        "drift": d.to_json(),
        "class_start": cls[0].to_json(),
        "class_end": cls[1].to_json(),
    }


def summary_json(traj: Trajectory) -> str:
    return json.dumps(trajectory_summary(traj), sort_keys=True, indent=2)
