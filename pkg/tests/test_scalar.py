import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from crmodel.scalar import I, ONE, SQRT2, ZERO, ExactScalar, format_scalar

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.builds(ExactScalar, small, small, small, small)
nonzero = scalars.filter(lambda x: not x.is_zero())


def test_sqrt2_squared():
    assert SQRT2 * SQRT2 == ExactScalar(2)


def test_map_constant_product():
    alpha = -I / SQRT2
    assert alpha * (I * SQRT2) == ONE


def test_self_division():
    x = ONE + I
    assert x / x == ONE


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_canonical_components():
    x = ExactScalar(Fraction(2, 4), Fraction(-3, 6), 0, Fraction(4, -8))
    assert x.components() == (Fraction(1, 2), Fraction(-1, 2), Fraction(0), Fraction(-1, 2))


def test_complex_rejected_by_coerce():
    with pytest.raises(TypeError):
        ExactScalar.coerce(1j)


@pytest.mark.parametrize("x, text", [
    (ExactScalar(0, Fraction(1, 2), 0, 0) * I, "1/2*sqrt2*i"),
    ((ONE + SQRT2) * I, "(1+sqrt2)*i"),
    (ONE + I, "1+i"),
    (ExactScalar(-3), "-3"),
    (ZERO, "0"),
])
def test_format(x, text):
    assert format_scalar(x) == text


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == ONE


@given(scalars, scalars)
def test_conjugation(a, b):
    assert a.conjugate().conjugate() == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * a.conjugate()).is_real()


def test_sign_matches_high_precision():
    rng = random.Random(11)
    mpmath.mp.dps = 50
    root = mpmath.sqrt(2)
    for _ in range(1000):
        a = Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 3))
        b = Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 3))
        if rng.random() < 0.1:
            # near cancellation: a close to -b*sqrt2
            b = Fraction(rng.randint(1, 10 ** 4), 1)
            a = -Fraction(int(mpmath.floor(b * root * 10 ** 6)), 10 ** 6)
        val = mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * root
        expected = 0 if val == 0 else (1 if val > 0 else -1)
        assert ExactScalar(a, b).sign() == expected


def test_sign_of_nonreal_raises():
    with pytest.raises(ValueError):
        I.sign()


@settings(max_examples=50)
@given(scalars, st.integers(min_value=0, max_value=5))
def test_power(a, k):
    p = ONE
    for _ in range(k):
        p = p * a
    assert a ** k == p
