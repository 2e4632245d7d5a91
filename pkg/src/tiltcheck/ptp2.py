"""Computations on the flag threefold P(T_P2): line bundle classes, the
thresholds on alpha, heart placement of the exceptional collection, the
charge cone test and the decomposition of a point class.

Two conventions for H.ch2 of a line bundle are carried side by side:
"ring" is the value computed in the cohomology ring, "paper" is the
closed form, which is exactly twice as large.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .chern import ChernVector
from .coh_ring import DivisorClass, Threefold, preset
from .numbers import QuadExt, format_rational, to_json_number
from .stability import Charge, charge_s_from_numbers, cone_check

CONVENTIONS = ("ring", "paper")


@dataclass(frozen=True)
class CollectionItem:
    twist: tuple[int, int]
    shift: int

    def __str__(self):
        return f"O({self.twist[0]},{self.twist[1]})[{self.shift}]"


COLLECTION: tuple[CollectionItem, ...] = tuple(
    CollectionItem(t, s)
    for t, s in (
        ((-1, -1), 3),
        ((0, -1), 2),
        ((1, -1), 1),
        ((-1, 0), 2),
        ((0, 0), 1),
        ((1, 0), 0),
    )
)

# Shift n with O(k,l)[n] in the doubly tilted heart, as listed in the proof.
PROOF_PLACEMENT: dict[tuple[int, int], int] = {
    (1, 0): 0,
    (0, 0): 1,
    (-1, 0): 2,
    (1, -1): 1,
    (0, -1): 2,
    (-1, -1): 2,
}

EXPECTED_QUADRANTS: dict[tuple[int, int], str] = {
    (-1, -1): "third",
    (1, 0): "first",
    (0, -1): "second",
    (1, -1): "second",
    (-1, 0): "second",
    (0, 0): "second",
}

DEFAULT_S = Fraction(1, 18)


def threefold() -> Threefold:
    return preset("PT_P2")


def polarization_class(a: int, b: int) -> DivisorClass:
    return threefold().ring.divisor(a, b)


def ch_line_bundle(k: int, l: int) -> ChernVector:
    """ch(O(k h1 + l h2))."""
    return ChernVector.exp(threefold().ring.divisor(k, l))


def _check_convention(convention: str):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")


# ------------------------------------------------------------ closed forms

def volume(a, b) -> Fraction:
    """H^3 for H = a h1 + b h2."""
    return Fraction(3 * a * b * (a + b))


def paper_h2_ch1(a, b, k, l) -> Fraction:
    return Fraction(l * a * a + 2 * (k + l) * a * b + k * b * b)


def paper_h_ch2(a, b, k, l) -> Fraction:
    return Fraction((2 * k + l) * l * a + (k + 2 * l) * k * b)


def paper_ch3(k, l) -> Fraction:
    return Fraction(k * l * (k + l), 2)


def ring_numbers(a, b, k, l) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(H^3 ch0, H^2 ch1, H ch2, ch3) of O(k,l), computed in the ring."""
    from .chern import h_vector

    return h_vector(ch_line_bundle(k, l), polarization_class(a, b))


def numbers(a, b, k, l, convention: str = "ring") -> tuple[Fraction, Fraction, Fraction, Fraction]:
    _check_convention(convention)
    if convention == "ring":
        return ring_numbers(a, b, k, l)
    return (volume(a, b), paper_h2_ch1(a, b, k, l), paper_h_ch2(a, b, k, l), paper_ch3(k, l))


@dataclass(frozen=True)
class FormulaComparison:
    formula: str
    paper: Fraction
    ring: Fraction

    @property
    def match(self) -> bool:
        return self.paper == self.ring

    @property
    def ratio(self) -> Fraction | None:
        return self.paper / self.ring if self.ring else None

    def to_dict(self) -> dict:
        return {
            "formula": self.formula,
            "paper": format_rational(self.paper),
            "ring": format_rational(self.ring),
            "match": self.match,
            "ratio": None if self.ratio is None else format_rational(self.ratio),
        }


def lemma_chcomp_report(a, b, k, l) -> tuple[FormulaComparison, FormulaComparison, FormulaComparison]:
    _, w1, w2, w3 = ring_numbers(a, b, k, l)
    return (
        FormulaComparison("H^2.ch1", paper_h2_ch1(a, b, k, l), w1),
        FormulaComparison("H.ch2", paper_h_ch2(a, b, k, l), w2),
        FormulaComparison("ch3", paper_ch3(k, l), w3),
    )


# ------------------------------------------------------------- thresholds

def alpha0_squared(a: int, b: int, mode: str = "paper") -> Fraction:
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    _check_convention(mode)
    if mode == "paper":
        return min(Fraction(2, a * (a + b)), Fraction(18, a * a + 6 * a * b + b * b))
    return min(alpha0_bounds(a, b, "ring").values())


def alpha0_bounds(a: int, b: int, convention: str = "ring") -> dict[str, Fraction]:
    """Upper bounds on alpha^2 from each strict condition used for the collection.

    The heart conditions are positivity of Im Z for O(1,0), O(0,-1), O(-1,-1)
    (O(-1,0) gives the same bound as O(1,0)); then Re Z(O(-1,-1)[3]) < 0 and
    the final chain bound that implies the cross inequality.
    """
    _check_convention(convention)
    c = 1 if convention == "ring" else 2
    return {
        "Im Z(O(1,0)) > 0": Fraction(c, a * (a + b)),
        "Im Z(O(0,-1)) > 0": Fraction(c, b * (a + b)),
        "Im Z(O(-1,-1)) > 0": Fraction(3 * c, a * b),
        "Re Z(O(-1,-1)[3]) < 0": Fraction(18, a * a + 4 * a * b + b * b),
        "final chain": Fraction(18, a * a + 6 * a * b + 2 * b * b),
    }


def alpha0(a: int, b: int, mode: str = "paper") -> QuadExt:
    """Threshold on alpha.

    ``paper`` is the closed-form minimum of two square roots.  ``ring`` is the
    minimum over the bounds of :func:`alpha0_bounds` with ring values.
    """
    return QuadExt.sqrt(alpha0_squared(a, b, mode))


# ------------------------------------------------------------------ hearts

@dataclass(frozen=True)
class Placement:
    shift: int
    boundary: bool  # a slope sign test met 0 exactly
    h2_ch1: Fraction
    im: QuadExt


def heart_placement(k, l, a, b, alpha, convention: str = "ring") -> Placement:
    """The shift n with O(k,l)[n] in the double tilt A_{alpha,0}.

    First tilt by the sign of H^2.ch1, then by the sign of nu, i.e. of
    alpha H.ch2 - alpha^3 H^3 / 6.  A vanishing nu puts the object in the
    torsion-free part of the second tilt, and the result is marked boundary.
    """
    alpha = QuadExt.coerce(alpha)
    if alpha.sign() <= 0:
        raise ValueError("alpha must be positive")
    w0, w1, w2, _ = numbers(a, b, k, l, convention)
    im = alpha * w2 - alpha * alpha * alpha * w0 / 6
    s_im = im.sign()
    if w1 > 0:
        return Placement(0 if s_im > 0 else 1, s_im == 0, w1, im)
    if w1 == 0:
        return Placement(1, False, w1, im)
    # L[1] lies in the first tilt and its nu has the sign of -im.
    return Placement(1 if s_im < 0 else 2, s_im == 0, w1, im)


def heart_membership(k, l, shift, a, b, alpha, convention: str = "ring") -> str:
    """"in_heart", "not_in_heart" or "boundary" for O(k,l)[shift]."""
    p = heart_placement(k, l, a, b, alpha, convention)
    if p.boundary:
        return "boundary"
    return "in_heart" if p.shift == shift else "not_in_heart"


# ---------------------------------------------------------------- charges

def collection_charges(a, b, alpha, s=DEFAULT_S, convention: str = "ring") -> list[Charge]:
    alpha = QuadExt.coerce(alpha)
    return [
        charge_s_from_numbers(numbers(a, b, *item.twist, convention), alpha, s).shift(item.shift)
        for item in COLLECTION
    ]


@dataclass(frozen=True)
class ChargeConeReport:
    holds: bool
    convention: str
    preconditions: tuple[str, ...]
    charges: tuple[Charge, ...]
    quadrants: dict
    cross_value: QuadExt | None
    cone_anomalies: tuple[int, ...]
    failures: tuple[str, ...] = field(default=())

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "convention": self.convention,
            "preconditions": list(self.preconditions),
            "failures": list(self.failures),
            "charges": {
                str(item): {"re": to_json_number(z.re), "im": to_json_number(z.im)}
                for item, z in zip(COLLECTION, self.charges)
            },
            "quadrants": {str(k): v for k, v in self.quadrants.items()},
            "cross_inequality": None if self.cross_value is None else to_json_number(self.cross_value),
            "zero_charges": [str(COLLECTION[i]) for i in self.cone_anomalies],
        }


def charge_cone_check(a, b, alpha, s=DEFAULT_S, convention: str = "ring") -> ChargeConeReport:
    """Quadrant placement, cross inequality and half-plane containment of the
    six collection charges under Z_{alpha,0,s}."""
    _check_convention(convention)
    alpha = QuadExt.coerce(alpha)
    pre = []
    if not (b > a > 0):
        pre.append("requires b > a > 0")
    if alpha.sign() <= 0:
        pre.append("requires alpha > 0")
    elif alpha * alpha >= alpha0_squared(a, b, convention):
        pre.append(f"requires alpha < alpha0 ({convention})")
    zs = collection_charges(a, b, alpha, s, convention)
    failures = []
    quads = {}
    for item, z in zip(COLLECTION, zs):
        q = z.quadrant()
        quads[item] = q
        want = EXPECTED_QUADRANTS[item.twist]
        if q != want:
            failures.append(f"{item} lies in {q} quadrant, expected {want}")
    z1 = zs[COLLECTION.index(CollectionItem((1, 0), 0))]
    z3 = zs[COLLECTION.index(CollectionItem((-1, -1), 3))]
    cross_value = None
    if z1.im and z3.im:
        cross_value = -z1.re / z1.im + z3.re / z3.im
        if cross_value.sign() <= 0:
            failures.append("cross inequality fails")
    else:
        failures.append("cross inequality undefined (zero imaginary part)")
    anomalies: tuple[int, ...] = ()
    if z1.is_zero():
        failures.append("anchor charge Z(O(1,0)) is zero")
    else:
        verdict = cone_check(zs, z1)
        anomalies = verdict.anomalies
        for i in verdict.offending:
            failures.append(f"{COLLECTION[i]} outside the half-plane")
    return ChargeConeReport(
        holds=not pre and not failures,
        convention=convention,
        preconditions=tuple(pre),
        charges=tuple(zs),
        quadrants=quads,
        cross_value=cross_value,
        cone_anomalies=anomalies,
        failures=tuple(failures),
    )


# ---------------------------------------------------- point decomposition

def _coords(c: ChernVector) -> list[Fraction]:
    return [c.ch0, *c.ch1.coords, *c.ch2.coords, c.ch3]


def collection_matrix() -> list[list[Fraction]]:
    cols = [_coords(ch_line_bundle(*item.twist).shift(item.shift)) for item in COLLECTION]
    return [list(row) for row in zip(*cols)]


def decompose(target: ChernVector) -> tuple[Fraction, ...]:
    """Coefficients n_i with sum n_i [E_i] = target, E_i the collection objects."""
    mat = collection_matrix()
    if linalg.determinant(mat) == 0:
        raise linalg.SingularSystemError("collection classes are dependent")
    return tuple(linalg.solve(mat, _coords(target)))


def decompose_skyscraper() -> tuple[int, ...]:
    n = decompose(ChernVector.point(threefold().ring))
    if any(x.denominator != 1 for x in n):
        raise ArithmeticError(f"non-integral dimension vector {n}")
    if any(x < 0 for x in n):
        raise ArithmeticError(f"negative dimension vector {n}")
    return tuple(int(x) for x in n)


def recombine(n) -> ChernVector:
    out = ChernVector.zero(threefold().ring)
    for c, item in zip(n, COLLECTION):
        out = out + ch_line_bundle(*item.twist).shift(item.shift).scale(c)
    return out


# ------------------------------------------------------------ Euler pairing

class MissingToddError(ValueError):
    pass


def todd_vector(x: Threefold) -> ChernVector:
    if not x.has_todd:
        raise MissingToddError(f"{x.name} has no Todd data")
    return ChernVector(Fraction(1), x.td1, x.td2, x.td3)


def euler_pairing(e: ChernVector, f: ChernVector, x: Threefold | None = None) -> Fraction:
    """chi(E, F) = integral of ch(E)^dual * ch(F) * td."""
    x = x or threefold()
    return (e.dual() * f * todd_vector(x)).ch3
