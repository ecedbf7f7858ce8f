"""Exact arithmetic in the field Q(i)[sqrt2].

An element is ``(a + b*sqrt2) + (c + d*sqrt2)*i`` with rational ``a, b, c, d``.
Internally the four numerators share one positive denominator and the
5-tuple is kept primitive, which makes the representation canonical and
keeps the hot paths (polynomial multiplication) on plain integers.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational

__all__ = ["ExactScalar", "ZERO", "ONE", "I", "SQRT2", "scalar"]


def _make(a: int, b: int, c: int, d: int, den: int) -> "ExactScalar":
    if den < 0:
        a, b, c, d, den = -a, -b, -c, -d, -den
    g = gcd(a, b, c, d, den)
    if g != 1:
        a //= g
        b //= g
        c //= g
        d //= g
        den //= g
    obj = object.__new__(ExactScalar)
    obj._v = (a, b, c, d, den)
    return obj


class ExactScalar:
    __slots__ = ("_v",)

    def __new__(cls, re_rat=0, re_rad=0, im_rat=0, im_rad=0):
        parts = [Fraction(x) for x in (re_rat, re_rad, im_rat, im_rad)]
        den = 1
        for p in parts:
            den = den * p.denominator // gcd(den, p.denominator)
        nums = [p.numerator * (den // p.denominator) for p in parts]
        return _make(nums[0], nums[1], nums[2], nums[3], den)

    # -- components -------------------------------------------------------

    @property
    def re_rat(self) -> Fraction:
        return Fraction(self._v[0], self._v[4])

    @property
    def re_rad(self) -> Fraction:
        return Fraction(self._v[1], self._v[4])

    @property
    def im_rat(self) -> Fraction:
        return Fraction(self._v[2], self._v[4])

    @property
    def im_rad(self) -> Fraction:
        return Fraction(self._v[3], self._v[4])

    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.re_rat, self.re_rad, self.im_rat, self.im_rad)

    @classmethod
    def coerce(cls, x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, int):
            return _make(x, 0, 0, 0, 1)
        if isinstance(x, Rational):
            return _make(x.numerator, 0, 0, 0, x.denominator)
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        raise TypeError(f"cannot coerce {type(x).__name__} to ExactScalar")

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        v = self._v
        return v[0] == 0 and v[1] == 0 and v[2] == 0 and v[3] == 0

    def is_real(self) -> bool:
        return self._v[2] == 0 and self._v[3] == 0

    def is_rational(self) -> bool:
        v = self._v
        return v[1] == 0 and v[2] == 0 and v[3] == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ExactScalar):
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        a1, b1, c1, d1, n1 = self._v
        a2, b2, c2, d2, n2 = other._v
        if n1 == n2:
            return _make(a1 + a2, b1 + b2, c1 + c2, d1 + d2, n1)
        return _make(a1 * n2 + a2 * n1, b1 * n2 + b2 * n1,
                     c1 * n2 + c2 * n1, d1 * n2 + d2 * n1, n1 * n2)

    __radd__ = __add__

    def __neg__(self):
        a, b, c, d, n = self._v
        obj = object.__new__(ExactScalar)
        obj._v = (-a, -b, -c, -d, n)
        return obj

    def __sub__(self, other):
        if not isinstance(other, ExactScalar):
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return ExactScalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ExactScalar):
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        a1, b1, c1, d1, n1 = self._v
        a2, b2, c2, d2, n2 = other._v
        if b1 == 0 and c1 == 0 and d1 == 0:
            return _make(a1 * a2, a1 * b2, a1 * c2, a1 * d2, n1 * n2)
        if b2 == 0 and c2 == 0 and d2 == 0:
            return _make(a2 * a1, a2 * b1, a2 * c1, a2 * d1, n1 * n2)
        # (u1 + v1 i)(u2 + v2 i) with u, v in Q(sqrt2); sqrt2*sqrt2 = 2
        uu = (a1 * a2 + 2 * b1 * b2, a1 * b2 + b1 * a2)
        vv = (c1 * c2 + 2 * d1 * d2, c1 * d2 + d1 * c2)
        uv = (a1 * c2 + 2 * b1 * d2, a1 * d2 + b1 * c2)
        vu = (c1 * a2 + 2 * d1 * b2, c1 * b2 + d1 * a2)
        return _make(uu[0] - vv[0], uu[1] - vv[1], uv[0] + vu[0], uv[1] + vu[1], n1 * n2)

    __rmul__ = __mul__

    def conjugate(self) -> "ExactScalar":
        a, b, c, d, n = self._v
        obj = object.__new__(ExactScalar)
        obj._v = (a, b, -c, -d, n)
        return obj

    def real(self) -> "ExactScalar":
        a, b, _, _, n = self._v
        return _make(a, b, 0, 0, n)

    def imag(self) -> "ExactScalar":
        _, _, c, d, n = self._v
        return _make(c, d, 0, 0, n)

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(i)[sqrt2]")
        a, b, c, d, _ = self._v
        n = self._v[4]
        # |x|^2 = u^2 + v^2 = p + q sqrt2 (scaled by n^2, which cancels below)
        p = a * a + 2 * b * b + c * c + 2 * d * d
        q = 2 * a * b + 2 * c * d
        # 1/(p + q sqrt2) = (p - q sqrt2) / (p^2 - 2 q^2)
        norm = p * p - 2 * q * q
        # conj(x) * (p - q sqrt2): conj(x) = (a + b r) - (c + d r) i
        re = (a * p - 2 * b * q, b * p - a * q)
        im = (-(c * p - 2 * d * q), -(d * p - c * q))
        return _make(re[0] * n, re[1] * n, im[0] * n, im[1] * n, norm)

    def __truediv__(self, other):
        if not isinstance(other, ExactScalar):
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        if other.is_rational():
            if other._v[0] == 0:
                raise ZeroDivisionError("division by zero in Q(i)[sqrt2]")
            a, b, c, d, n = self._v
            return _make(a * other._v[4], b * other._v[4], c * other._v[4],
                         d * other._v[4], n * other._v[0])
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison and sign ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self._v == other._v
        try:
            return self._v == ExactScalar.coerce(other)._v
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self._v)

    def sign(self) -> int:
        """Sign of a real element a + b*sqrt2, decided exactly."""
        if not self.is_real():
            raise ValueError(f"sign of non-real scalar {self}")
        a, b = self._v[0], self._v[1]
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with 2 b^2
        dominant_a = a * a > 2 * b * b
        return ((a > 0) - (a < 0)) if dominant_a else ((b > 0) - (b < 0))

    def __lt__(self, other):
        return (self - ExactScalar.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - ExactScalar.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - ExactScalar.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - ExactScalar.coerce(other)).sign() >= 0

    # -- conversion -------------------------------------------------------

    def __complex__(self) -> complex:
        a, b, c, d, n = self._v
        r2 = 2 ** 0.5
        return complex((a + b * r2) / n, (c + d * r2) / n)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._v[0], self._v[4])

    def __repr__(self) -> str:
        return f"ExactScalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
I = ExactScalar(0, 0, 1, 0)
SQRT2 = ExactScalar(0, 1)


def scalar(x) -> ExactScalar:
    """Coerce an int, Fraction or ExactScalar."""
    return ExactScalar.coerce(x)


# -- canonical text ---------------------------------------------------------


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_q2(rat: Fraction, rad: Fraction) -> str:
    """Text for rat + rad*sqrt2 (empty string for zero)."""
    out = ""
    if rat:
        out = _fmt_q(rat)
    if rad:
        if rad == 1:
            piece = "sqrt2"
        elif rad == -1:
            piece = "-sqrt2"
        else:
            piece = f"{_fmt_q(rad)}*sqrt2"
        if out and not piece.startswith("-"):
            out += "+"
        out += piece
    return out


def is_monomial_scalar(c: ExactScalar) -> bool:
    """True when exactly one of the four components is nonzero."""
    return sum(1 for x in c._v[:4] if x) == 1


def format_scalar(c: ExactScalar) -> str:
    """Canonical text: ``a+b*sqrt2+(c+d*sqrt2)*i`` with zero parts omitted."""
    re_rat, re_rad, im_rat, im_rad = c.components()
    re = _fmt_q2(re_rat, re_rad)
    im = _fmt_q2(im_rat, im_rad)
    if not im:
        return re or "0"
    if im == "1":
        im_txt = "i"
    elif im == "-1":
        im_txt = "-i"
    elif im_rad == 0:
        im_txt = f"{im}*i"
    elif im_rat == 0:
        im_txt = f"{im}*i"
    else:
        im_txt = f"({im})*i"
    if not re:
        return im_txt
    if im_txt.startswith("-"):
        return re + im_txt
    return re + "+" + im_txt
