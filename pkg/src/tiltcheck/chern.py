"""Twisted Chern characters, the v-vector of a polarization, the discriminants
and the two Bogomolov-Gieseker type checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .coh_ring import (
    CohRing,
    CurveClass,
    DivisorClass,
    RingMismatchError,
    integrate,
    mul_div_div,
    same_ring,
)
from .numbers import Interval, QuadExt, TowerExt, format_rational, parse_scalar


class NotDefinedError(ValueError):
    """The discriminant is negative, so beta-bar is not a real number."""


class DegenerateInputError(ValueError):
    """The denominator of beta-bar vanishes (for example a skyscraper class)."""


@dataclass(frozen=True)
class ChernVector:
    ch0: Fraction
    ch1: DivisorClass
    ch2: CurveClass
    ch3: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ch0", Fraction(self.ch0))
        object.__setattr__(self, "ch3", Fraction(self.ch3))
        if not same_ring(self.ch1.ring, self.ch2.ring):
            raise RingMismatchError("ch1 and ch2 live in different rings")

    @property
    def ring(self) -> CohRing:
        return self.ch1.ring

    @classmethod
    def from_coords(cls, ring: CohRing, ch0, ch1, ch2, ch3) -> ChernVector:
        return cls(Fraction(ch0), ring.divisor(tuple(ch1)), ring.curve(tuple(ch2)), Fraction(ch3))

    @classmethod
    def zero(cls, ring: CohRing) -> ChernVector:
        return cls(Fraction(0), ring.zero_divisor(), ring.zero_curve(), Fraction(0))

    @classmethod
    def point(cls, ring: CohRing) -> ChernVector:
        """Class of a skyscraper sheaf."""
        return cls(Fraction(0), ring.zero_divisor(), ring.zero_curve(), Fraction(1))

    @classmethod
    def exp(cls, d: DivisorClass) -> ChernVector:
        """ch(O(D)) = exp(D)."""
        dd = mul_div_div(d.ring, d, d)
        return cls(Fraction(1), d, dd.scale(Fraction(1, 2)), d.cube() / 6)

    def _check(self, other: ChernVector):
        if not same_ring(self.ring, other.ring):
            raise RingMismatchError("Chern vectors from different rings")

    def __add__(self, other: ChernVector) -> ChernVector:
        self._check(other)
        return ChernVector(
            self.ch0 + other.ch0, self.ch1 + other.ch1, self.ch2 + other.ch2, self.ch3 + other.ch3
        )

    def __sub__(self, other: ChernVector) -> ChernVector:
        return self + (-other)

    def __neg__(self) -> ChernVector:
        return ChernVector(-self.ch0, -self.ch1, -self.ch2, -self.ch3)

    def scale(self, c) -> ChernVector:
        c = Fraction(c)
        return ChernVector(c * self.ch0, self.ch1.scale(c), self.ch2.scale(c), c * self.ch3)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ChernVector):
            return NotImplemented
        self._check(other)
        r = self.ring
        a, b = self, other
        return ChernVector(
            a.ch0 * b.ch0,
            b.ch1.scale(a.ch0) + a.ch1.scale(b.ch0),
            b.ch2.scale(a.ch0) + a.ch2.scale(b.ch0) + mul_div_div(r, a.ch1, b.ch1),
            a.ch0 * b.ch3 + b.ch0 * a.ch3 + integrate(r, a.ch1, b.ch2) + integrate(r, b.ch1, a.ch2),
        )

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def dual(self) -> ChernVector:
        return ChernVector(self.ch0, -self.ch1, self.ch2, -self.ch3)

    def shift(self, n: int) -> ChernVector:
        """Class of E[n]."""
        return self if n % 2 == 0 else -self

    def components(self) -> tuple:
        return (self.ch0, self.ch1.coords, self.ch2.coords, self.ch3)

    def to_dict(self) -> dict:
        fr = format_rational
        return {
            "ch0": fr(self.ch0),
            "ch1": [fr(v) for v in self.ch1.coords],
            "ch2": [fr(v) for v in self.ch2.coords],
            "ch3": fr(self.ch3),
        }


GradedQuadruple = ChernVector


def twist(ch: ChernVector, b: DivisorClass) -> ChernVector:
    """ch^B = exp(-B) * ch."""
    if not same_ring(ch.ring, b.ring):
        raise RingMismatchError("twist by a divisor from another ring")
    if b.is_zero():
        return ch
    r = ch.ring
    bb = mul_div_div(r, b, b)
    ch1 = ch.ch1 - b.scale(ch.ch0)
    ch2 = ch.ch2 - mul_div_div(r, b, ch.ch1) + bb.scale(ch.ch0 / 2)
    ch3 = (
        ch.ch3
        - integrate(r, b, ch.ch2)
        + integrate(r, ch.ch1, bb) / 2
        - ch.ch0 * integrate(r, b, bb) / 6
    )
    return ChernVector(ch.ch0, ch1, ch2, ch3)


def _alpha(value) -> QuadExt:
    if isinstance(value, str):
        return parse_scalar(value)
    return QuadExt.coerce(value)


@dataclass(frozen=True)
class Polarization:
    """omega = alpha * H together with a B-field.

    ``alpha`` may be irrational as long as alpha**2 is rational.
    """

    H: DivisorClass
    alpha: QuadExt = QuadExt(1)
    B: DivisorClass | None = None

    def __post_init__(self):
        alpha = _alpha(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if alpha.sign() <= 0:
            raise ValueError("alpha must be positive")
        if alpha.a != 0 and alpha.b != 0:
            raise ValueError("alpha**2 must be rational (alpha = c or c*sqrt(r))")
        if self.B is None:
            object.__setattr__(self, "B", self.H.ring.zero_divisor())
        elif not same_ring(self.B.ring, self.H.ring):
            raise RingMismatchError("B and H live in different rings")
        if self.H.cube() <= 0:
            raise ValueError("H^3 must be positive for an ample class")

    @property
    def ring(self) -> CohRing:
        return self.H.ring

    @property
    def alpha_sq(self) -> Fraction:
        return (self.alpha * self.alpha).to_fraction()

    @property
    def omega(self) -> DivisorClass:
        """omega as a divisor class; only available when alpha is rational."""
        return self.H.scale(self.alpha.to_fraction())

    def with_B(self, b: DivisorClass) -> Polarization:
        return Polarization(self.H, self.alpha, b)

    def check_ample(self, nef_cone) -> None:
        from .divisor_checks import is_ample_in_cone

        if not is_ample_in_cone(self.H, nef_cone):
            raise ValueError(f"H = {self.H} is not in the interior of the nef cone")


@dataclass(frozen=True)
class TwistedVector:
    """(omega^3 ch0^B, omega^2 ch1^B, omega ch2^B, ch3^B).

    ``w`` holds the same numbers with omega replaced by H; then
    v_i = alpha**(3-i) * w_i.
    """

    v0: QuadExt
    v1: QuadExt
    v2: QuadExt
    v3: QuadExt
    w: tuple[Fraction, Fraction, Fraction, Fraction] | None = None
    alpha: QuadExt = QuadExt(1)

    @classmethod
    def of(cls, v0, v1, v2, v3) -> TwistedVector:
        """A bare vector (alpha = 1)."""
        w = tuple(Fraction(x) for x in (v0, v1, v2, v3))
        return cls(*(QuadExt(x) for x in w), w=w)

    def as_tuple(self) -> tuple:
        return (self.v0, self.v1, self.v2, self.v3)


def h_vector(ch: ChernVector, H: DivisorClass, B: DivisorClass | None = None) -> tuple[Fraction, ...]:
    """(H^3 ch0^B, H^2 ch1^B, H ch2^B, ch3^B) as rationals."""
    if not same_ring(ch.ring, H.ring):
        raise RingMismatchError("class and polarization live in different rings")
    t = twist(ch, B) if B is not None else ch
    r = ch.ring
    hh = mul_div_div(r, H, H)
    return (
        t.ch0 * integrate(r, H, hh),
        integrate(r, t.ch1, hh),
        integrate(r, H, t.ch2),
        t.ch3,
    )


def v_vector(ch: ChernVector, pol: Polarization) -> TwistedVector:
    w = h_vector(ch, pol.H, pol.B)
    a = pol.alpha
    a2 = a * a
    return TwistedVector(a2 * a * w[0], a2 * w[1], a * w[2], QuadExt(w[3]), w=w, alpha=a)


def delta_bar(ch: ChernVector, pol: Polarization) -> QuadExt:
    return delta_bar_v(v_vector(ch, pol))


def delta_bar_v(v: TwistedVector) -> QuadExt:
    return v.v1 * v.v1 - 2 * v.v0 * v.v2


def nabla_bar(ch: ChernVector, pol: Polarization) -> QuadExt:
    return nabla_bar_v(v_vector(ch, pol))


def nabla_bar_v(v: TwistedVector) -> QuadExt:
    return 2 * v.v2 * v.v2 - 3 * v.v1 * v.v3


def bg_quantity(ch: ChernVector, pol: Polarization) -> QuadExt:
    v = v_vector(ch, pol)
    return delta_bar_v(v) + 6 * nabla_bar_v(v)


def _reduced_beta(w) -> QuadExt:
    """u = 2 w2 / (w1 + sqrt(w1^2 - 2 w0 w2)), the parameter with beta-bar = u / alpha."""
    w0, w1, w2, _ = w
    delta = w1 * w1 - 2 * w0 * w2
    if delta < 0:
        raise NotDefinedError(f"discriminant is negative ({format_rational(delta)})")
    den = QuadExt(w1) + QuadExt.sqrt(delta)
    if not den:
        raise DegenerateInputError("beta-bar has zero denominator (v1 + sqrt(Delta) = 0)")
    return 2 * QuadExt(w2) / den


def beta_bar(ch: ChernVector, pol: Polarization) -> Union[QuadExt, TowerExt]:
    """Exact beta-bar.

    The discriminant is alpha**4 times a rational number, so beta-bar is
    u / alpha with u in a quadratic field.  When u and alpha have different
    irrational parts the result is a TowerExt.
    """
    w = h_vector(ch, pol.H, pol.B)
    return _divide_by_alpha(_reduced_beta(w), pol.alpha)


def _divide_by_alpha(u: QuadExt, alpha: QuadExt) -> Union[QuadExt, TowerExt]:
    if alpha.is_rational or u.is_rational or u.r == alpha.r:
        return u / alpha
    # alpha = c*sqrt(r); u/alpha = u * sqrt(r) / (c r)
    c = alpha.b
    k = QuadExt(0, 1 / (c * alpha.r), alpha.r)
    return TowerExt(k * u.a, k * u.b, QuadExt(u.r))


@dataclass(frozen=True)
class BMSResult:
    status: str  # "holds", "fails" or "undecided"
    value: QuadExt | None
    enclosure: Interval
    beta_bar: Union[QuadExt, TowerExt]
    note: str = "evaluates the inequality on the class only; stability of an object is not checked"

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def _ch3_shifted(w, u):
    """ch3^{B + uH} from the H-vector at B."""
    w0, w1, w2, w3 = w
    return w3 - u * w2 + u * u * w1 / 2 - u * u * u * w0 / 6


def bms_check(ch: ChernVector, pol: Polarization, exact: bool = True) -> BMSResult:
    """Sign of ch3 twisted by B + beta-bar * omega.

    With ``exact`` the value is computed in the quadratic field of beta-bar
    and the verdict is never undecided.  Otherwise the same expression is
    evaluated on a rational enclosure of beta-bar and the verdict is
    "undecided" whenever the enclosure straddles 0.
    """
    w = h_vector(ch, pol.H, pol.B)
    u = _reduced_beta(w)
    bb = _divide_by_alpha(u, pol.alpha)
    if exact:
        value = _ch3_shifted([QuadExt(x) for x in w], u)
        s = value.sign()
        return BMSResult("holds" if s <= 0 else "fails", value, value.enclose(), bb)
    iv = _ch3_shifted([Interval(x) for x in w], u.enclose(Fraction(1, 10**15)))
    s = iv.sign()
    if s is None:
        status = "undecided"
    else:
        status = "holds" if s <= 0 else "fails"
    return BMSResult(status, None, iv, bb)
