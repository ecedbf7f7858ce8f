import random
from fractions import Fraction

import sympy as sp

from crmodel import linalg
from crmodel.scalar import ExactScalar, ONE


def _random_rows(rng, m, n):
    rows = []
    for _ in range(m):
        r = {}
        for j in range(n):
            if rng.random() < 0.5:
                v = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                if v:
                    r[j] = ExactScalar(v)
        rows.append(r)
    return rows


def test_nullspace_dimension_and_vectors_match_sympy():
    rng = random.Random(5)
    for _ in range(40):
        m, n = rng.randint(1, 5), rng.randint(1, 6)
        rows = _random_rows(rng, m, n)
        null = linalg.nullspace(rows, list(range(n)))
        M = sp.Matrix([[r.get(j, ExactScalar(0)).to_fraction() for j in range(n)] for r in rows])
        assert len(null) == n - M.rank()
        for v in null:
            for r in rows:
                assert sum((r[j] * v[j] for j in r if j in v), ExactScalar(0)).is_zero()


def test_nullspace_independent_of_row_order():
    rng = random.Random(8)
    rows = _random_rows(rng, 4, 6)
    a = linalg.nullspace(rows, list(range(6)))
    b = linalg.nullspace(list(reversed(rows)), list(range(6)))
    assert a == b


def test_solve_and_express():
    e = [{0: ONE, 1: ONE}, {1: ONE}]
    assert linalg.express(e, {0: ExactScalar(2), 1: ExactScalar(5)}) == [ExactScalar(2), ExactScalar(3)]
    assert linalg.express(e, {2: ONE}) is None
    assert linalg.rank(e + [{0: ONE}]) == 2
    assert linalg.in_span(e, {0: ONE})
