"""Nef/ample membership and the numerical positivity tests for divisors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import sympy

from .coh_ring import DivisorClass, Threefold, mul_div_div, integrate
from .numbers import format_rational


class PreconditionError(ValueError):
    pass


class UndefinedError(ZeroDivisionError):
    pass


@lru_cache(maxsize=64)
def _cone_inverse(gens: tuple[tuple[Fraction, ...], ...]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(gens)
    if n == 0 or any(len(g) != n for g in gens):
        raise NotImplementedError("only simplicial full-dimensional cones are supported")
    m = sympy.Matrix([[sympy.Rational(g[i].numerator, g[i].denominator) for g in gens] for i in range(n)])
    if m.det() == 0:
        raise NotImplementedError("cone generators are linearly dependent")
    inv = m.inv()
    return tuple(tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(n)) for i in range(n))


def cone_coordinates(d: DivisorClass, cone: Sequence[DivisorClass]) -> tuple[Fraction, ...]:
    """Coefficients of D in the generators of a simplicial cone."""
    inv = _cone_inverse(tuple(g.coords for g in cone))
    return tuple(sum((a * b for a, b in zip(row, d.coords)), Fraction(0)) for row in inv)


def is_nef_in_cone(d: DivisorClass, cone: Sequence[DivisorClass]) -> bool:
    return all(c >= 0 for c in cone_coordinates(d, cone))


def is_ample_in_cone(d: DivisorClass, cone: Sequence[DivisorClass]) -> bool:
    return all(c > 0 for c in cone_coordinates(d, cone))


def is_nef(d: DivisorClass, x: Threefold) -> bool:
    return is_nef_in_cone(d, x.nef_cone)


def is_ample(d: DivisorClass, x: Threefold) -> bool:
    """Strict interior of the nef cone."""
    return is_ample_in_cone(d, x.nef_cone)


@dataclass(frozen=True)
class Numbers:
    """h = H^3, p = H^2.D, q = H.D^2, d = D^3."""

    h: Fraction
    p: Fraction
    q: Fraction
    d: Fraction

    @classmethod
    def of(cls, d: DivisorClass, H: DivisorClass) -> Numbers:
        r = d.ring
        hh = mul_div_div(r, H, H)
        dd = mul_div_div(r, d, d)
        return cls(integrate(r, H, hh), integrate(r, d, hh), integrate(r, H, dd), integrate(r, d, dd))


@dataclass(frozen=True)
class NegTestResult:
    holds: bool
    lhs: Fraction
    rhs: Fraction

    def __iter__(self):
        return iter((self.holds, self.lhs, self.rhs))


def neg_divisor_test(d: DivisorClass, H: DivisorClass, x: Threefold | None = None) -> NegTestResult:
    """Strict inequality D^3 > (H^2 D)^3 / (4 (H^3)^2) + 3 (H D^2)^2 / (4 H^2 D)."""
    if x is not None and not is_ample(H, x):
        raise PreconditionError(f"H = {H} is not ample")
    n = Numbers.of(d, H)
    return neg_test_numbers(n)


def neg_test_numbers(n: Numbers) -> NegTestResult:
    if n.p == 0:
        raise UndefinedError("H^2.D = 0, the right-hand side is undefined")
    rhs = n.p ** 3 / (4 * n.h * n.h) + 3 * n.q * n.q / (4 * n.p)
    return NegTestResult(n.d > rhs, n.d, rhs)


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: Fraction | None
    rhs: Fraction | None
    holds: bool | None  # None when undefined
    note: str = ""

    def to_dict(self) -> dict:
        fr = format_rational
        return {
            "name": self.name,
            "lhs": None if self.lhs is None else fr(self.lhs),
            "rhs": None if self.rhs is None else fr(self.rhs),
            "holds": self.holds,
            "note": self.note,
        }


@dataclass(frozen=True)
class HodgeChainReport:
    numbers: Numbers
    h1: Inequality
    h2: Inequality
    h3: Inequality
    h4: Inequality
    h5: Inequality
    h5_steps: tuple[Inequality, Inequality, Inequality]

    @property
    def main(self) -> tuple[Inequality, ...]:
        return (self.h1, self.h2, self.h3, self.h4, self.h5)

    @property
    def all_hold(self) -> bool:
        """(h1) to (h5); the intermediate steps of (h5) are reported separately."""
        return all(i.holds for i in self.main)

    def to_dict(self) -> dict:
        fr = format_rational
        n = self.numbers
        return {
            "numbers": {"H^3": fr(n.h), "H^2.D": fr(n.p), "H.D^2": fr(n.q), "D^3": fr(n.d)},
            "inequalities": [i.to_dict() for i in self.main],
            "h5_steps": [i.to_dict() for i in self.h5_steps],
            "all_hold": self.all_hold,
        }


def _ge(name: str, lhs, rhs, note: str = "") -> Inequality:
    return Inequality(name, lhs, rhs, lhs >= rhs, note)


def hodge_chain(d: DivisorClass, H: DivisorClass, x: Threefold | None = None) -> HodgeChainReport:
    """Evaluate (h1)-(h5) for nef D and ample H.

    (h5) is the bound (H.D^2)^2 / H^2.D >= D^3; it is reached through three
    intermediate quotients which are each reported.  When H^2.D = 0 the
    denominator-free form (H.D^2)^2 >= H^2.D * D^3 is used.
    """
    if x is not None:
        if not is_nef(d, x):
            raise PreconditionError(f"D = {d} is not nef")
        if not is_ample(H, x):
            raise PreconditionError(f"H = {H} is not ample")
    return hodge_chain_numbers(Numbers.of(d, H))


def hodge_chain_numbers(n: Numbers) -> HodgeChainReport:
    h, p, q, d = n.h, n.p, n.q, n.d
    h1 = _ge("h1", p ** 3, h * h * d)
    h2 = _ge("h2", q ** 3, h * d * d)
    h3 = _ge("h3", p * p, h * q)
    h4 = _ge("h4", p ** 3 / (h * h), d)
    if p != 0:
        h5 = _ge("h5", q * q / p, d)
    else:
        h5 = _ge("h5", q * q, p * d, "H^2.D = 0: compared (H.D^2)^2 with H^2.D * D^3")
    if p != 0 and q != 0:
        t0, t1, t2, t3 = q * q / p, h * d * d / (p * q), p * p * d / (q * h), d
        steps = (
            _ge("h5.1", t0, t1, "uses h2"),
            _ge("h5.2", t1, t2, "uses h4"),
            _ge("h5.3", t2, t3, "uses h3"),
        )
    else:
        steps = tuple(
            Inequality(f"h5.{k}", None, None, None, "undefined: zero denominator") for k in (1, 2, 3)
        )
    return HodgeChainReport(n, h1, h2, h3, h4, h5, steps)
