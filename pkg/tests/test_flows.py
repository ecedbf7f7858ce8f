import json
import math
from fractions import Fraction

import numpy as np
import pytest

from crmodel import catalog as cat
from crmodel.flows import (
    CSV_COLUMNS, FlowError, batch_ratio_drift, classify_point, compile_poly, integrate_batch,
    integrate_flow, invariant_drift, random_starts, rk4_exact, summary_json, trajectory_csv,
)
from crmodel.lie import HoloVField
from crmodel.poly import Poly
from crmodel.scalar import I, ExactScalar
from crmodel.suites import flow_convergence

g = dict(zip(cat.LABELS, cat.make_algebra("g").fields))


def test_translation_flow():
    X = HoloVField.from_dict(cat.T, cat.AMBIENT, {"w2": Poly.const(cat.T, 1)})
    tr = integrate_flow(X, [0.0] * 6, 0.5, 0.01)
    assert np.allclose(tr.end, [0, 0, 0.5, 0, 0, 0], atol=1e-14)
    assert len(tr) == 51


def test_euler_field_scales_by_weights():
    start = np.array([0.3, -0.2, 0.5, 0.1, -0.4, 0.7])
    tr = integrate_flow(g["X0"], start, math.log(2), math.log(2) / 2000)
    scale = np.array([2, 2, 4, 4, 8, 8])
    assert np.allclose(tr.end, start * scale, rtol=1e-10)


def test_compile_poly_matches_exact_evaluation():
    f = cat.Q_INVARIANT
    ev = compile_poly(f, ("x1", "y1", "x2", "y2", "x3", "y3"))
    pt = [Fraction(1, 3), Fraction(-2, 5), Fraction(3, 7), Fraction(1, 2), Fraction(-1, 4), Fraction(2, 9)]
    exact = f.evaluate(dict(zip(("x1", "y1", "x2", "y2", "x3", "y3"), map(ExactScalar.coerce, pt))))
    got = ev(np.array([float(x) for x in pt]))
    assert abs(complex(got) - float(exact.constant_value().to_fraction())) < 1e-14


def test_rk4_exact_classification():
    assert [rk4_exact(g[k]) for k in cat.LABELS] == [True, True, True, True, False]


@pytest.mark.parametrize("label", cat.LABELS)
def test_ratio_conserved(label):
    starts = random_starts(20, seed=2024, min_abs_P=0.1)
    assert float(batch_ratio_drift(g[label], starts).max()) <= 1e-9


def test_fourth_order_convergence_of_euler_flow():
    starts = random_starts(20, seed=2024, min_abs_P=0.1)
    r = flow_convergence(g["X0"], starts)
    assert 12 <= r["ratio"] <= 20


def test_random_starts_respect_threshold():
    from crmodel.flows import invariants_for, compile_poly as cp
    starts = random_starts(50, seed=3, min_abs_P=0.2)
    P = cp(invariants_for(cat.AMBIENT)[0], ("x1", "y1", "x2", "y2", "x3", "y3"))
    assert starts.shape == (50, 6)
    assert np.all(np.abs(P(starts)) > 0.2)
    assert np.array_equal(starts, random_starts(50, seed=3, min_abs_P=0.2))


def test_sign_of_p_preserved():
    starts = random_starts(10, seed=1)
    from crmodel.flows import invariants_for, compile_poly as cp
    P = cp(invariants_for(cat.AMBIENT)[0], ("x1", "y1", "x2", "y2", "x3", "y3"))
    for X in g.values():
        ends = integrate_batch(X, starts, 1.0, 1e-2)
        assert np.array_equal(np.sign(P(starts)), np.sign(P(ends)))


def test_blowup_reports_step():
    X = HoloVField.from_dict(cat.T, cat.AMBIENT, {"z": Poly.var(cat.T, "z") ** 2})
    with pytest.raises(FlowError) as exc:
        integrate_flow(X, [1, 0, 0, 0, 0, 0], 3.0, 0.01)
    assert exc.value.step > 90


def test_drift_and_outputs():
    tr = integrate_flow(g["X1"], [0.1, 0.2, 0.3, 0.9, -0.2, 0.4], 1.0, 0.01)
    d = invariant_drift(tr)
    assert d.mu2 < 1e-12 and not d.flagged
    text = trajectory_csv(tr, every=10)
    lines = text.strip().split("\n")
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert len(lines) == 1 + 11
    summary = json.loads(summary_json(tr))
    assert summary["schema"] == "crmodel.flow/1" and summary["steps"] == 100
    assert summary["class_start"]["kind"] == summary["class_end"]["kind"]
    assert summary_json(tr) == summary_json(tr)


def test_bad_arguments():
    with pytest.raises(ValueError):
        integrate_flow(g["X0"], [0] * 6, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate_flow(g["X0"], [0] * 5, 1.0)


def test_classify_examples():
    assert classify_point((0, 0, 0)).kind == "cubic"
    c = classify_point((0, I, 0))
    assert c.kind == "plus" and c.mu2 == 0 and c.exact
    assert classify_point((0, 0, I)).kind == "complement"
    assert classify_point((0, -I, 0)).kind == "minus"
    f = classify_point((0.0, 1e-14 * 1j, 0.0))
    assert f.kind == "cubic" and not f.exact


def test_classify_tube_coordinates():
    assert classify_point((0, 1, 0, 1, 0, 1), coords=cat.TUBE).kind == "cubic"
    assert classify_point((0, 0, 0, 1, 0, 0), coords=cat.TUBE).kind != "cubic"


def test_tube_cubic_is_invariant_under_g_tilde_flows():
    for X in cat.make_algebra("g_tilde").fields:
        t = 0.4
        tr = integrate_flow(X, (0.3, t, -0.1, t * t, 0.5, t ** 3), 0.5, 1e-3)
        s = tr.states
        assert np.max(np.abs(s[:, 3] - s[:, 1] ** 2)) < 1e-9
        assert np.max(np.abs(s[:, 5] - s[:, 1] ** 3)) < 1e-9
