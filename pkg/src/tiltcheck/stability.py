"""Slopes, central charges, the half-plane cone test and tilt walls in the
(alpha, beta)-plane."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chern import ChernVector, Polarization, TwistedVector, h_vector, v_vector
from .coh_ring import DivisorClass
from .numbers import QuadExt, format_rational


@dataclass(frozen=True)
class ExtendedSlope:
    """A slope value, or +infinity when the denominator vanishes."""

    value: QuadExt | None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @classmethod
    def infinity(cls) -> ExtendedSlope:
        return cls(None)

    def compare(self, other: ExtendedSlope) -> int:
        if self.is_infinite or other.is_infinite:
            return int(self.is_infinite) - int(other.is_infinite)
        return (self.value - other.value).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __str__(self):
        return "+inf" if self.value is None else str(self.value)


def _ratio(num: QuadExt, den: QuadExt) -> ExtendedSlope:
    if not den:
        return ExtendedSlope.infinity()
    return ExtendedSlope(num / den)


def mu_slope(v: TwistedVector) -> ExtendedSlope:
    return _ratio(v.v1, v.v0)


def nu_slope(v: TwistedVector) -> ExtendedSlope:
    return _ratio(v.v2 - v.v0 / 6, v.v1)


@dataclass(frozen=True)
class Charge:
    re: QuadExt
    im: QuadExt

    def __post_init__(self):
        object.__setattr__(self, "re", QuadExt.coerce(self.re))
        object.__setattr__(self, "im", QuadExt.coerce(self.im))

    def __neg__(self) -> Charge:
        return Charge(-self.re, -self.im)

    def __add__(self, other: Charge) -> Charge:
        return Charge(self.re + other.re, self.im + other.im)

    def scale(self, c) -> Charge:
        return Charge(self.re * c, self.im * c)

    def shift(self, n: int) -> Charge:
        """Charge of E[n]."""
        return self if n % 2 == 0 else -self

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def quadrant(self) -> str:
        """first: Re>0, Im>0; second: Re<=0, Im>0; third: Re<0, Im<0; fourth: Re>=0, Im<0."""
        sr, si = self.re.sign(), self.im.sign()
        if si > 0:
            return "first" if sr > 0 else "second"
        if si < 0:
            return "third" if sr < 0 else "fourth"
        if sr > 0:
            return "positive-real"
        return "negative-real" if sr < 0 else "zero"

    def __str__(self):
        return f"{self.re} + ({self.im})i"


def central_charge(ch: ChernVector, pol: Polarization) -> Charge:
    """Z = -ch3^B + omega^2 ch1^B / 2 + i (omega ch2^B - omega^3 ch0 / 6)."""
    v = v_vector(ch, pol)
    return Charge(-v.v3 + v.v1 / 2, v.v2 - v.v0 / 6)


def charge_s(ch: ChernVector, alpha, H: DivisorClass, s) -> Charge:
    """Z_{alpha,0,s} = -ch3 + s alpha^2 H^2 ch1 + i (alpha H ch2 - alpha^3 H^3 ch0 / 6)."""
    alpha = QuadExt.coerce(alpha)
    if alpha.sign() <= 0:
        raise ValueError("alpha must be positive")
    w = h_vector(ch, H)
    return charge_s_from_numbers(w, alpha, s)


def charge_s_from_numbers(w: Sequence, alpha: QuadExt, s) -> Charge:
    """The same charge from (H^3 ch0, H^2 ch1, H ch2, ch3)."""
    w0, w1, w2, w3 = (Fraction(x) for x in w)
    a2 = alpha * alpha
    return Charge(-w3 + Fraction(s) * a2 * w1, alpha * w2 - a2 * alpha * w0 / 6)


def cross(u: Charge, z: Charge) -> QuadExt:
    """Imaginary part of conj(u) * z; positive when z is counterclockwise of u."""
    return u.re * z.im - u.im * z.re


@dataclass(frozen=True)
class ConeVerdict:
    holds: bool
    offending: tuple[int, ...] = ()
    anomalies: tuple[int, ...] = ()

    def __bool__(self):
        return self.holds


def cone_check(charges: Iterable[Charge], anchor: Charge) -> ConeVerdict:
    """Do all charges lie in {r exp(i pi phi): r >= 0, phi0 <= phi <= phi0 + 1}?

    phi0 is the phase of ``anchor``; the closed cone is the half-plane to the
    left of the anchor ray, tested by the sign of a 2x2 determinant.  Zero
    charges are listed as anomalies and do not affect the verdict.
    """
    if anchor.is_zero():
        raise ValueError("anchor charge must be nonzero")
    offending, anomalies = [], []
    for i, z in enumerate(charges):
        if z.is_zero():
            anomalies.append(i)
        elif cross(anchor, z).sign() < 0:
            offending.append(i)
    return ConeVerdict(not offending, tuple(offending), tuple(anomalies))


# ------------------------------------------------------------------ walls

@dataclass(frozen=True)
class WallConic:
    """c_alpha2 * alpha^2 + c_beta2 * beta^2 + c_beta * beta + c_const = 0.

    Equals nu(E) - nu(F) times alpha * D_E * D_F, where D = H^2 ch1 - beta H^3 ch0.
    """

    c_alpha2: Fraction
    c_beta2: Fraction
    c_beta: Fraction
    c_const: Fraction
    d_e: tuple[Fraction, Fraction]
    d_f: tuple[Fraction, Fraction]

    @property
    def degenerate(self) -> bool:
        return not (self.c_alpha2 or self.c_beta2 or self.c_beta or self.c_const)

    def value(self, alpha_sq, beta) -> Fraction:
        return self.c_alpha2 * alpha_sq + self.c_beta2 * beta * beta + self.c_beta * beta + self.c_const

    def nu_difference_sign(self, alpha_sq, beta) -> int:
        """sign(nu(E) - nu(F)) at omega = alpha H, B = beta H (alpha > 0)."""
        de = self.d_e[0] + self.d_e[1] * beta
        df = self.d_f[0] + self.d_f[1] * beta
        if de == 0 and df == 0:
            return 0
        if de == 0:
            return 1
        if df == 0:
            return -1
        w = self.value(alpha_sq, beta)
        s = (w > 0) - (w < 0)
        return s * ((de > 0) - (de < 0)) * ((df > 0) - (df < 0))

    def coefficients(self) -> dict:
        fr = format_rational
        return {
            "alpha^2": fr(self.c_alpha2),
            "beta^2": fr(self.c_beta2),
            "beta": fr(self.c_beta),
            "1": fr(self.c_const),
        }


def wall_conic(e: ChernVector, f: ChernVector, H: DivisorClass) -> WallConic:
    xe, ye, ze, _ = h_vector(e, H)
    xf, yf, zf, _ = h_vector(f, H)
    return WallConic(
        c_alpha2=(xf * ye - xe * yf) / 6,
        c_beta2=(ye * xf - xe * yf) / 2,
        c_beta=xe * zf - xf * ze,
        c_const=ze * yf - zf * ye,
        d_e=(ye, -xe),
        d_f=(yf, -xf),
    )


@dataclass(frozen=True)
class Grid:
    alpha_max: Fraction
    beta_min: Fraction
    beta_max: Fraction
    steps_alpha: int
    steps_beta: int

    def __post_init__(self):
        if self.steps_alpha < 1 or self.steps_beta < 1:
            raise ValueError("grid must have at least one node")
        if Fraction(self.alpha_max) <= 0:
            raise ValueError("alpha range must be positive")
        if Fraction(self.beta_max) < Fraction(self.beta_min):
            raise ValueError("empty beta range")

    def alphas(self) -> list[Fraction]:
        """alpha_i = alpha_max * (i+1) / n, so every node has alpha > 0."""
        n = self.steps_alpha
        return [Fraction(self.alpha_max) * (i + 1) / n for i in range(n)]

    def betas(self) -> list[Fraction]:
        n = self.steps_beta
        lo, hi = Fraction(self.beta_min), Fraction(self.beta_max)
        if n == 1:
            return [(lo + hi) / 2]
        return [lo + (hi - lo) * j / (n - 1) for j in range(n)]


@dataclass(frozen=True)
class WallDiagram:
    e: ChernVector
    f: ChernVector
    H: DivisorClass
    conic: WallConic
    grid: Grid
    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]
    signs: tuple[tuple[int, ...], ...] = field(repr=False)  # signs[i][j] at (alphas[i], betas[j])

    @property
    def degenerate(self) -> bool:
        return self.conic.degenerate

    def to_dict(self) -> dict:
        fr = format_rational
        return {
            "E": self.e.to_dict(),
            "F": self.f.to_dict(),
            "H": [fr(c) for c in self.H.coords],
            "conic": self.conic.coefficients(),
            "degenerate": self.degenerate,
            "alphas": [fr(a) for a in self.alphas],
            "betas": [fr(b) for b in self.betas],
            "signs": [list(row) for row in self.signs],
        }

    def to_json(self) -> str:
        import json

        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    def to_svg(self, size: int = 400) -> str:
        from .svg import wall_svg

        return wall_svg(self, size)


def wall_scan(
    e: ChernVector,
    f: ChernVector,
    H: DivisorClass,
    grid: Grid,
    order: str = "row",
) -> WallDiagram:
    """Sign of nu(E) - nu(F) on every grid node, via the cleared conic.

    ``order`` ("row", "column" or "reverse") only changes the traversal;
    the resulting diagram is the same.
    """
    conic = wall_conic(e, f, H)
    alphas, betas = grid.alphas(), grid.betas()
    cells = [(i, j) for i in range(len(alphas)) for j in range(len(betas))]
    if order == "column":
        cells.sort(key=lambda c: (c[1], c[0]))
    elif order == "reverse":
        cells.reverse()
    elif order != "row":
        raise ValueError(f"unknown traversal order {order!r}")
    table: dict[tuple[int, int], int] = {}
    for i, j in cells:
        table[i, j] = conic.nu_difference_sign(alphas[i] * alphas[i], betas[j])
    signs = tuple(tuple(table[i, j] for j in range(len(betas))) for i in range(len(alphas)))
    return WallDiagram(e, f, H, conic, grid, tuple(alphas), tuple(betas), signs)


def nu_difference_direct(e: ChernVector, f: ChernVector, H: DivisorClass, alpha, beta) -> int:
    """sign(nu(E) - nu(F)) from the v-vectors, independent of the conic."""
    b = H.scale(beta)
    pol = Polarization(H, QuadExt.coerce(alpha), b)
    ne, nf = nu_slope(v_vector(e, pol)), nu_slope(v_vector(f, pol))
    return ne.compare(nf)


__all__ = [
    "Charge",
    "ConeVerdict",
    "ExtendedSlope",
    "Grid",
    "WallConic",
    "WallDiagram",
    "central_charge",
    "charge_s",
    "charge_s_from_numbers",
    "cone_check",
    "cross",
    "mu_slope",
    "nu_difference_direct",
    "nu_slope",
    "wall_conic",
    "wall_scan",
]
