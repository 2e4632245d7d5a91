"""Pullback along the fiberwise multiplication map and the splitting of
pushforwards of line bundles along toric Frobenius covers."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .chern import ChernVector, twist
from .coh_ring import DivisorClass


def frobenius_pullback(c: ChernVector, m: int) -> ChernVector:
    """(x, y, z, w) -> (x, m^2 y, m^4 z, m^6 w)."""
    if not isinstance(m, int) or m < 1:
        raise ValueError("m must be a positive integer")
    m2 = m * m
    return ChernVector(c.ch0, c.ch1.scale(m2), c.ch2.scale(m2 * m2), c.ch3 * m2 ** 3)


@dataclass(frozen=True)
class TwistIdentity:
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.equal))


def ch3_twist_identity(e: ChernVector, d: DivisorClass, m: int, q: int) -> TwistIdentity:
    """ch3 of F_{mq}^* E tensored with O(-m^2 q D), against (mq)^6 ch3^{D/q}(E)."""
    if m < 1 or q < 1:
        raise ValueError("m and q must be positive")
    pulled = frobenius_pullback(e, m * q)
    lhs = twist(pulled, d.scale(m * m * q)).ch3
    rhs = (m * q) ** 6 * twist(e, d.scale(Fraction(1, q))).ch3
    return TwistIdentity(lhs, rhs)


CASES = ("P1BundleOverA", "P2BundleOverC", "P1xP1BundleOverC")
CASE_ALIASES = {"p1a": "P1BundleOverA", "p2c": "P2BundleOverC", "p1p1c": "P1xP1BundleOverC"}


@dataclass(frozen=True, order=True)
class SplitSummand:
    """O(fiber_twist) tensored with the pullback of L^{e/m} for each base exponent e."""

    fiber_twist: tuple[int, ...]
    base_exponent: tuple[int, ...]
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")


@dataclass(frozen=True)
class SplitResult:
    case: str
    degrees: tuple[int, ...]
    m: int
    extracted_twist: tuple[int, ...]
    reduced_degrees: tuple[int, ...]
    summands: tuple[SplitSummand, ...]
    convention: str = (
        "base exponents are powers of L^(1/m), ranging over 0..m^2-1; "
        "fiber twists are relative to the extracted twist"
    )

    @property
    def rank(self) -> int:
        return sum(s.multiplicity for s in self.summands)

    def fiber_twists(self) -> Counter:
        out: Counter = Counter()
        for s in self.summands:
            out[s.fiber_twist] += s.multiplicity
        return out

    def absolute_fiber_twists(self) -> Counter:
        out: Counter = Counter()
        for s in self.summands:
            out[tuple(t + e for t, e in zip(s.fiber_twist, self.extracted_twist))] += s.multiplicity
        return out

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "degrees": list(self.degrees),
            "m": self.m,
            "extracted_twist": list(self.extracted_twist),
            "reduced_degrees": list(self.reduced_degrees),
            "rank": self.rank,
            "convention": self.convention,
            "summands": [
                {
                    "fiber_twist": list(s.fiber_twist),
                    "base_exponent": list(s.base_exponent),
                    "multiplicity": s.multiplicity,
                }
                for s in self.summands
            ],
        }


def p1_frobenius_twists(a: int, n: int) -> list[int]:
    """Degrees of the summands of the pushforward of O(a) along z -> z^n on P^1,
    indexed by the residue c = 0..n-1 of the monomial exponent."""
    return [(a - c) // n for c in range(n)]


def p2_frobenius_twists(a: int, n: int) -> dict[tuple[int, int], int]:
    """Same for [x:y:z] -> [x^n:y^n:z^n] on P^2, indexed by residues (c1, c2)."""
    return {(c1, c2): (a - c1 - c2) // n for c1 in range(n) for c2 in range(n)}


def toric_split_summands(case: str, degrees, m: int) -> SplitResult:
    case = CASE_ALIASES.get(case, case)
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; choose from {', '.join(CASES)}")
    if not isinstance(m, int) or m < 1:
        raise ValueError("m must be a positive integer")
    degrees = tuple(int(x) for x in (degrees if isinstance(degrees, (list, tuple)) else (degrees,)))
    need = 2 if case == "P1xP1BundleOverC" else 1
    if len(degrees) != need:
        raise ValueError(f"case {case} takes {need} fiber degree(s)")
    n = m * m
    extracted = tuple(a // n for a in degrees)
    reduced = tuple(a % n for a in degrees)
    summands: list[SplitSummand] = []
    if case == "P1BundleOverA":
        for c, t in enumerate(p1_frobenius_twists(reduced[0], n)):
            summands.append(SplitSummand((t,), (c,)))
    elif case == "P2BundleOverC":
        for (c1, c2), t in sorted(p2_frobenius_twists(reduced[0], n).items()):
            summands.append(SplitSummand((t,), (c1, c2)))
    else:
        first = p1_frobenius_twists(reduced[0], n)
        second = p1_frobenius_twists(reduced[1], n)
        for (c1, t1), (c2, t2) in itertools.product(enumerate(first), enumerate(second)):
            summands.append(SplitSummand((t1, t2), (c1, c2)))
    return SplitResult(case, degrees, m, extracted, reduced, tuple(summands))


def expected_rank(case: str, m: int) -> int:
    case = CASE_ALIASES.get(case, case)
    return m ** 2 if case == "P1BundleOverA" else m ** 4
