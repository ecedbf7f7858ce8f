import pytest

from crmodel import catalog as cat
from crmodel.cr import SurfaceError
from crmodel.lie import same_real_span
from crmodel.stabilizer import bracket_closure_check, graded_stabilizer, vanishing_certified, weight_ansatz


def _count_monomials(weights, W):
    """Monomials of total weight W, counted by brute force."""
    if W < 0:
        return 0
    n = 0
    a_max = W // weights[0]
    for a in range(a_max + 1):
        for b in range(W // weights[1] + 1):
            rest = W - a * weights[0] - b * weights[1]
            if rest >= 0 and rest % weights[2] == 0:
                n += 1
    return n


@pytest.mark.parametrize("gamma", [1, -1])
def test_s_gamma_stabilizer(gamma):
    comps = graded_stabilizer(cat.make_hypersurface("S", gamma=gamma), -3, 5)
    assert [c.dimension for c in comps] == [1, 1, 2, 1, 0, 0, 0, 0, 0]
    assert same_real_span([X for c in comps for X in c.basis], cat.make_algebra("A1").fields)
    assert bracket_closure_check(comps)
    assert vanishing_certified(comps)


def test_dimensions_do_not_depend_on_unknown_order():
    M = cat.make_hypersurface("S", gamma=1)
    base = [c.dimension for c in graded_stabilizer(M, -3, 2)]
    for seed in (1, 7, 99):
        assert [c.dimension for c in graded_stabilizer(M, -3, 2, shuffle_seed=seed)] == base


def test_truncation_breaks_closure():
    comps = graded_stabilizer(cat.make_hypersurface("S", gamma=1), -3, 5)
    detail = []
    assert not bracket_closure_check([c for c in comps if c.weight != -3], detail)


def test_quadric_fifteen():
    comps = graded_stabilizer(cat.make_hypersurface("quadric_indef"), -2, 2,
                              weights={"z1": 1, "z2": 1, "z3": 2})
    assert [c.dimension for c in comps] == [1, 4, 5, 4, 1]
    assert bracket_closure_check(comps)


def test_hyperplane_matches_counting_oracle():
    # on Im z3 = 0 the d/dz1, d/dz2 coefficients are free and the d/dz3
    # coefficient is a real power series in z3 alone
    w = (1, 2, 3)
    comps = graded_stabilizer(cat.make_hypersurface("hyperplane"), -2, 2)
    expected = []
    for k in range(-2, 3):
        n = 2 * (_count_monomials(w, k + 1) + _count_monomials(w, k + 2))
        n += 1 if (k + 3) % 3 == 0 and k + 3 >= 0 else 0
        expected.append(n)
    assert [c.dimension for c in comps] == expected
    assert sum(expected) > 5


def test_ansatz_sizes():
    assert len(weight_ansatz(cat.T, cat.TUBE, -3)) == 1
    assert len(weight_ansatz(cat.T, cat.TUBE, 0)) == _count_monomials((1, 2, 3), 1) + \
        _count_monomials((1, 2, 3), 2) + _count_monomials((1, 2, 3), 3)


def test_formal_surface_rejected():
    with pytest.raises(SurfaceError):
        graded_stabilizer(cat.make_hypersurface("S"), -1, 0)
