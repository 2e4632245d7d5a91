"""Exact scalars: rationals, quadratic extensions Q(sqrt r), one further
square root on top of those, and rational interval enclosures.

Every sign in this package is decided here, by comparing squares of
rationals, never by floating point.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

from sympy import factorint

Rational = Fraction
Scalar = Union[int, Fraction, "QuadExt"]


class FieldMismatchError(ValueError):
    """Two algebraic numbers live in different quadratic fields."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, QuadExt) and x.is_rational:
        return x.a
    raise TypeError(f"not a rational number: {x!r}")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer, or a finite decimal string exactly."""
    if not isinstance(text, str):
        raise TypeError(f"rationals must be given as strings, got {type(text).__name__}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_sqrt(x: Fraction) -> Fraction | None:
    """The nonnegative rational square root of ``x``, or None."""
    x = as_fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@lru_cache(maxsize=4096)
def _squarefree_split(n: int) -> tuple[int, int]:
    """n = c**2 * s with s squarefree; returns (c, s)."""
    c, s = 1, 1
    for p, e in factorint(n).items():
        c *= p ** (e // 2)
        if e % 2:
            s *= p
    return c, s


_ZERO = Fraction(0)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


class QuadExt:
    """The number a + b*sqrt(r) with a, b rational and r a squarefree integer.

    ``r == 1`` means the value is rational (and then ``b == 0``).  Elements
    with different ``r`` can only be combined when one of them is rational.
    """

    __slots__ = ("a", "b", "r")

    def __init__(self, a=0, b=0, r=1):
        a = a if type(a) is Fraction else Fraction(a)
        b = b if type(b) is Fraction else Fraction(b)
        if b and r != 1:
            r = Fraction(r)
            if r <= 0:
                raise ValueError("radicand must be positive")
            c, s = _squarefree_split(r.numerator * r.denominator)
            b = b * Fraction(c, r.denominator)
            r = s
        else:
            if r <= 0:
                raise ValueError("radicand must be positive")
            r = 1
        if r == 1:
            a, b = a + b, _ZERO
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "r", int(r))

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, r: int) -> QuadExt:
        """Trusted constructor: ``r`` already squarefree, both parts Fractions."""
        obj = object.__new__(cls)
        if not b:
            b, r = _ZERO, 1
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "r", r)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def sqrt(cls, t) -> QuadExt:
        t = as_fraction(t)
        if t < 0:
            raise ValueError(f"square root of negative number {t}")
        return cls(0, 1, t) if t else cls(0)

    @classmethod
    def coerce(cls, x) -> QuadExt:
        if isinstance(x, QuadExt):
            return x
        if type(x) is Fraction:
            return cls._raw(x, _ZERO, 1)
        if isinstance(x, (int, Fraction)):
            return cls._raw(Fraction(x), _ZERO, 1)
        raise TypeError(f"cannot convert {x!r} to QuadExt")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.a

    def _field(self, other: QuadExt) -> int:
        if self.r == other.r or other.r == 1:
            return self.r
        if self.r == 1:
            return other.r
        raise FieldMismatchError(f"Q(sqrt {self.r}) vs Q(sqrt {other.r})")

    def __add__(self, other):
        if type(other) is not QuadExt:
            try:
                other = QuadExt.coerce(other)
            except TypeError:
                return NotImplemented
        r = self._field(other)
        return QuadExt._raw(self.a + other.a, self.b + other.b, r)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt._raw(-self.a, -self.b, self.r)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if type(other) is not QuadExt:
            try:
                other = QuadExt.coerce(other)
            except TypeError:
                return NotImplemented
        r = self._field(other)
        return QuadExt._raw(self.a - other.a, self.b - other.b, r)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is not QuadExt:
            try:
                other = QuadExt.coerce(other)
            except TypeError:
                return NotImplemented
        if not other.b:
            c = other.a
            return QuadExt._raw(self.a * c, self.b * c, self.r) if self.b else QuadExt._raw(self.a * c, _ZERO, 1)
        if not self.b:
            c = self.a
            return QuadExt._raw(other.a * c, other.b * c, other.r)
        r = self._field(other)
        return QuadExt._raw(
            self.a * other.a + self.b * other.b * r,
            self.a * other.b + self.b * other.a,
            r,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadExt:
        return QuadExt._raw(self.a, -self.b, self.r)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.r

    def inverse(self) -> QuadExt:
        if not self.b:
            if not self.a:
                raise ZeroDivisionError("division by zero in quadratic field")
            return QuadExt._raw(1 / self.a, _ZERO, 1)
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadExt._raw(self.a / n, -self.b / n, self.r)

    def __truediv__(self, other):
        if type(other) is not QuadExt:
            try:
                other = QuadExt.coerce(other)
            except TypeError:
                return NotImplemented
        if not other.b:
            if not other.a:
                raise ZeroDivisionError("division by zero in quadratic field")
            c = other.a
            return QuadExt._raw(self.a / c, self.b / c, self.r)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadExt.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QuadExt(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        c = _sign(self.a * self.a - self.b * self.b * self.r)
        return sa if c > 0 else sb

    def __eq__(self, other):
        try:
            other = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.r == other.r

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.r))

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.r)

    def __repr__(self):
        if self.is_rational:
            return f"QuadExt({self.a})"
        return f"QuadExt({self.a}, {self.b}, {self.r})"

    def __str__(self):
        if self.is_rational:
            return str(self.a)
        rad = f"sqrt({self.r})" if self.b == 1 else f"{self.b}*sqrt({self.r})"
        if self.a == 0:
            return rad if self.b != -1 else f"-sqrt({self.r})"
        sep = "+" if self.b > 0 else ""
        return f"{self.a}{sep}{rad}"

    def enclose(self, width=Fraction(1, 10**12)) -> Interval:
        if self.is_rational:
            return Interval(self.a, self.a)
        bits = 40
        while True:
            root = sqrt_enclosure(Fraction(self.r), bits)
            iv = self.a + root * self.b
            if iv.width <= width:
                return iv
            bits *= 2


def sqrt_in_field(x: QuadExt, r: int) -> QuadExt | None:
    """A square root of ``x`` inside Q(sqrt r), or None if there is none."""
    x = QuadExt.coerce(x)
    if x.sign() < 0:
        return None
    if x.is_rational:
        root = rational_sqrt(x.a)
        if root is not None:
            return QuadExt(root)
        if r > 1:
            c = rational_sqrt(x.a / r)
            if c is not None:
                return QuadExt(0, c, r)
        return None
    if x.r != r:
        raise FieldMismatchError(f"{x} does not lie in Q(sqrt {r})")
    n = rational_sqrt(x.norm())
    if n is None:
        return None
    for u2 in ((x.a + n) / 2, (x.a - n) / 2):
        u = rational_sqrt(u2) if u2 > 0 else None
        if u is None:
            continue
        y = QuadExt(u, x.b / (2 * u), r)
        if y * y == x:
            return y if y.sign() >= 0 else -y
    return None


class TowerExt:
    """x + y*sqrt(d) with x, y, d in one quadratic field K and d not a square in K.

    Used for the twist parameter whose radicand is not a square in the
    polarization's field; arithmetic and signs stay exact.
    """

    __slots__ = ("x", "y", "d")

    def __init__(self, x, y, d):
        self.x = QuadExt.coerce(x)
        self.y = QuadExt.coerce(y)
        self.d = QuadExt.coerce(d)

    @classmethod
    def sqrt(cls, d, r: int) -> QuadExt | TowerExt:
        """sqrt(d) for d >= 0 in Q(sqrt r); collapses to QuadExt when possible."""
        d = QuadExt.coerce(d)
        if d.sign() < 0:
            raise ValueError(f"square root of negative number {d}")
        root = sqrt_in_field(d, r)
        if root is not None:
            return root
        return cls(0, 1, d)

    def _lift(self, other) -> TowerExt:
        if isinstance(other, TowerExt):
            if other.d != self.d:
                raise FieldMismatchError("different second radicands")
            return other
        return TowerExt(QuadExt.coerce(other), 0, self.d)

    @staticmethod
    def _make(x, y, d):
        if not y:
            return x
        return TowerExt(x, y, d)

    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self._make(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return TowerExt(-self.x, -self.y, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self._make(
            self.x * o.x + self.y * o.y * self.d,
            self.x * o.y + self.y * o.x,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.x * self.x - self.y * self.y * self.d
        if not n:
            raise ZeroDivisionError("division by zero in tower field")
        return self._make(self.x / n, -self.y / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, TowerExt):
            return self * other.inverse()
        return self._make(self.x / other, self.y / other, self.d)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        out = QuadExt(1)
        for _ in range(n):
            out = self * out
        return out

    def sign(self) -> int:
        sx, sy = self.x.sign(), self.y.sign()
        if sy == 0 or sx == sy:
            return sx or sy
        if sx == 0:
            return sy
        c = (self.x * self.x - self.y * self.y * self.d).sign()
        if c == 0:
            return 0
        return sx if c > 0 else sy

    def __eq__(self, other):
        if isinstance(other, TowerExt):
            return self.x == other.x and self.y == other.y and self.d == other.d
        if isinstance(other, (int, Fraction, QuadExt)):
            return not self.y and self.x == other
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.d))

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.x) + float(self.y) * math.sqrt(float(self.d))

    def __repr__(self):
        return f"TowerExt({self.x!r}, {self.y!r}, {self.d!r})"

    def __str__(self):
        return f"({self.x})+({self.y})*sqrt({self.d})"

    def enclose(self, width=Fraction(1, 10**12)) -> Interval:
        w = width / 8
        while True:
            x, y, d = self.x.enclose(w), self.y.enclose(w), self.d.enclose(w)
            root = Interval(
                sqrt_enclosure(max(d.lo, Fraction(0)), 64).lo,
                sqrt_enclosure(d.hi, 64).hi,
            )
            iv = x + y * root
            if iv.width <= width:
                return iv
            w /= 1024


AlgebraicValue = Union[QuadExt, TowerExt]


class Interval:
    """A closed interval with rational endpoints.

    Endpoints are exact, so rounding is never an issue; the only loss is
    the enclosure width chosen by the caller.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = as_fraction(lo)
        hi = lo if hi is None else as_fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo, self.hi = lo, hi

    @staticmethod
    def coerce(x) -> Interval:
        if isinstance(x, Interval):
            return x
        if isinstance(x, (QuadExt, TowerExt)):
            return x.enclose()
        return Interval(x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other):
        o = Interval.coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-Interval.coerce(other))

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        o = Interval.coerce(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Interval.coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return Interval.coerce(other) / self

    def __contains__(self, x):
        if isinstance(x, (QuadExt, TowerExt)):
            iv = x.enclose(self.width / 4 if self.width else Fraction(1, 10**15))
            return self.lo <= iv.lo and iv.hi <= self.hi
        return self.lo <= as_fraction(x) <= self.hi

    def sign(self) -> int | None:
        """Sign of every point of the interval, or None when it straddles 0."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


def sqrt_enclosure(t: Fraction, bits: int) -> Interval:
    """Rational bounds on sqrt(t) with width at most 2**-bits."""
    t = as_fraction(t)
    if t < 0:
        raise ValueError("negative radicand")
    exact = rational_sqrt(t)
    if exact is not None:
        return Interval(exact, exact)
    scale = 1 << bits
    n = math.isqrt(math.floor(t * scale * scale))
    return Interval(Fraction(n, scale), Fraction(n + 1, scale))


def sign_of(x) -> int:
    if isinstance(x, (QuadExt, TowerExt)):
        return x.sign()
    return _sign(as_fraction(x))


_SQRT_RE = re.compile(r"^\s*sqrt\(\s*([^()]+?)\s*\)\s*$")


def parse_scalar(text: str) -> QuadExt:
    """Parse "p/q", a decimal, "sqrt(p/q)" or the named constant "li-threshold"."""
    text = text.strip()
    if text == "li-threshold":
        return LI_THRESHOLD
    m = _SQRT_RE.match(text)
    if m:
        return QuadExt.sqrt(parse_rational(m.group(1)))
    return QuadExt(parse_rational(text))


def to_json_number(x) -> str | dict:
    """"p/q" for rationals; an interval (plus the exact form) otherwise."""
    if isinstance(x, (int, Fraction)):
        return format_rational(x)
    if isinstance(x, QuadExt) and x.is_rational:
        return format_rational(x.a)
    if isinstance(x, Interval):
        return {"interval": [format_rational(x.lo), format_rational(x.hi)]}
    iv = x.enclose()
    return {"interval": [format_rational(iv.lo), format_rational(iv.hi)], "exact": str(x)}


# Lower end of the alpha range in which the reduction to small alpha applies.
LI_THRESHOLD = QuadExt.sqrt(Fraction(1, 12))
