"""Even cohomology rings of threefolds as exact structure constants.

A ring is stored by two tables: ``div_div[i][j]`` is the product of divisor
basis elements i and j written in the curve basis, and ``div_curve[i][c]``
is the degree of divisor i on curve c.  Every triple intersection number
comes from these two tables.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from .numbers import format_rational, parse_rational


class RingError(ValueError):
    """Malformed ring data or a class used with the wrong ring."""


class DimensionError(RingError):
    pass


class RingMismatchError(RingError):
    pass


class RingParseError(RingError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)


def _fractions(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class CohRing:
    divisor_basis: tuple[str, ...]
    curve_basis: tuple[str, ...]
    div_div: tuple[tuple[tuple[Fraction, ...], ...], ...]
    div_curve: tuple[tuple[Fraction, ...], ...]
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "divisor_basis", tuple(self.divisor_basis))
        object.__setattr__(self, "curve_basis", tuple(self.curve_basis))
        object.__setattr__(
            self, "div_div",
            tuple(tuple(_fractions(c) for c in row) for row in self.div_div),
        )
        object.__setattr__(self, "div_curve", tuple(_fractions(row) for row in self.div_curve))

    @property
    def rho(self) -> int:
        return len(self.divisor_basis)

    @property
    def rho_curves(self) -> int:
        return len(self.curve_basis)

    def shape_errors(self) -> list[str]:
        rho, rc = self.rho, self.rho_curves
        out = []
        if len(self.div_div) != rho:
            out.append(f"div_div has {len(self.div_div)} rows, expected {rho}")
        for i, row in enumerate(self.div_div):
            if len(row) != rho:
                out.append(f"div_div[{i}] has {len(row)} entries, expected {rho}")
            for j, c in enumerate(row):
                if len(c) != rc:
                    out.append(f"div_div[{i}][{j}] has {len(c)} coordinates, expected {rc}")
        if len(self.div_curve) != rho:
            out.append(f"div_curve has {len(self.div_curve)} rows, expected {rho}")
        for i, row in enumerate(self.div_curve):
            if len(row) != rc:
                out.append(f"div_curve[{i}] has {len(row)} entries, expected {rc}")
        return out

    @cached_property
    def triple_table(self) -> tuple[tuple[tuple[Fraction, ...], ...], ...]:
        """T[i][j][k] = integral of D_i * (D_j * D_k)."""
        if self.shape_errors():
            raise DimensionError("; ".join(self.shape_errors()))
        r = range(self.rho)
        return tuple(
            tuple(
                tuple(
                    sum((a * b for a, b in zip(self.div_curve[i], self.div_div[j][k])), Fraction(0))
                    for k in r
                )
                for j in r
            )
            for i in r
        )

    @cached_property
    def _sparse_triples(self) -> tuple[tuple[int, int, int, Fraction], ...]:
        t = self.triple_table
        r = range(self.rho)
        return tuple((i, j, k, t[i][j][k]) for i in r for j in r for k in r if t[i][j][k])

    def triple_coords(self, x: Sequence, y: Sequence, z: Sequence) -> Fraction:
        return sum((v * x[i] * y[j] * z[k] for i, j, k, v in self._sparse_triples), Fraction(0))

    def divisor(self, *coords) -> DivisorClass:
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = tuple(coords[0])
        return DivisorClass(self, _fractions(coords))

    def curve(self, *coords) -> CurveClass:
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = tuple(coords[0])
        return CurveClass(self, _fractions(coords))

    def zero_divisor(self) -> DivisorClass:
        return DivisorClass(self, (Fraction(0),) * self.rho)

    def zero_curve(self) -> CurveClass:
        return CurveClass(self, (Fraction(0),) * self.rho_curves)

    def basis_divisor(self, i: int) -> DivisorClass:
        return DivisorClass(self, tuple(Fraction(int(j == i)) for j in range(self.rho)))

    def basis_divisors(self) -> list[DivisorClass]:
        return [self.basis_divisor(i) for i in range(self.rho)]


def same_ring(a: CohRing, b: CohRing) -> bool:
    return a is b or a == b


def _check_ring(a, b):
    if not same_ring(a.ring, b.ring):
        raise RingMismatchError(f"classes from rings {a.ring.name!r} and {b.ring.name!r}")


@dataclass(frozen=True)
class DivisorClass:
    ring: CohRing
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.ring.rho:
            raise DimensionError(
                f"divisor needs {self.ring.rho} coordinates, got {len(self.coords)}"
            )

    def __add__(self, other: DivisorClass) -> DivisorClass:
        _check_ring(self, other)
        return DivisorClass(self.ring, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        _check_ring(self, other)
        return DivisorClass(self.ring, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(self.ring, tuple(-a for a in self.coords))

    def scale(self, c) -> DivisorClass:
        c = Fraction(c)
        return DivisorClass(self.ring, tuple(c * a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, DivisorClass):
            return mul_div_div(self.ring, self, other)
        if isinstance(other, CurveClass):
            return integrate(self.ring, self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coords)

    def cube(self) -> Fraction:
        return self.ring.triple_coords(self.coords, self.coords, self.coords)

    def __str__(self):
        return " + ".join(
            f"{format_rational(c)}*{lab}" for c, lab in zip(self.coords, self.ring.divisor_basis) if c
        ) or "0"


@dataclass(frozen=True)
class CurveClass:
    ring: CohRing
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.ring.rho_curves:
            raise DimensionError(
                f"curve class needs {self.ring.rho_curves} coordinates, got {len(self.coords)}"
            )

    def __add__(self, other: CurveClass) -> CurveClass:
        _check_ring(self, other)
        return CurveClass(self.ring, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: CurveClass) -> CurveClass:
        _check_ring(self, other)
        return CurveClass(self.ring, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> CurveClass:
        return CurveClass(self.ring, tuple(-a for a in self.coords))

    def scale(self, c) -> CurveClass:
        c = Fraction(c)
        return CurveClass(self.ring, tuple(c * a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, DivisorClass):
            return integrate(self.ring, other, self)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coords)


def mul_div_div(ring: CohRing, d1: DivisorClass, d2: DivisorClass) -> CurveClass:
    for d in (d1, d2):
        if len(d.coords) != ring.rho:
            raise DimensionError(f"divisor needs {ring.rho} coordinates, got {len(d.coords)}")
        if not same_ring(d.ring, ring):
            raise RingMismatchError("divisor does not belong to this ring")
    out = [Fraction(0)] * ring.rho_curves
    for i, a in enumerate(d1.coords):
        if not a:
            continue
        for j, b in enumerate(d2.coords):
            if not b:
                continue
            ab = a * b
            for c, v in enumerate(ring.div_div[i][j]):
                if v:
                    out[c] += ab * v
    return CurveClass(ring, tuple(out))


def integrate(ring: CohRing, d: DivisorClass, c: CurveClass) -> Fraction:
    if len(d.coords) != ring.rho:
        raise DimensionError(f"divisor needs {ring.rho} coordinates, got {len(d.coords)}")
    if len(c.coords) != ring.rho_curves:
        raise DimensionError(f"curve needs {ring.rho_curves} coordinates, got {len(c.coords)}")
    if not (same_ring(d.ring, ring) and same_ring(c.ring, ring)):
        raise RingMismatchError("class does not belong to this ring")
    total = Fraction(0)
    for i, a in enumerate(d.coords):
        if a:
            row = ring.div_curve[i]
            for k, b in enumerate(c.coords):
                if b:
                    total += a * b * row[k]
    return total


def triple(d1: DivisorClass, d2: DivisorClass, d3: DivisorClass) -> Fraction:
    _check_ring(d1, d2)
    _check_ring(d1, d3)
    return d1.ring.triple_coords(d1.coords, d2.coords, d3.coords)


def validate_ring(ring: CohRing) -> list[str]:
    """Every violated ring axiom, as readable strings; empty when the ring is sound."""
    report = ring.shape_errors()
    if report:
        return report
    rho = ring.rho
    for i in range(rho):
        for j in range(i + 1, rho):
            if ring.div_div[i][j] != ring.div_div[j][i]:
                report.append(
                    f"not commutative: {ring.divisor_basis[i]}*{ring.divisor_basis[j]} "
                    f"!= {ring.divisor_basis[j]}*{ring.divisor_basis[i]}"
                )
    t = ring.triple_table
    for i, j, k in itertools.combinations_with_replacement(range(rho), 3):
        vals = {(p, t[p[0]][p[1]][p[2]]) for p in set(itertools.permutations((i, j, k)))}
        if len({v for _, v in vals}) > 1:
            labels = ",".join(ring.divisor_basis[x] for x in (i, j, k))
            detail = ", ".join(f"{p}={format_rational(v)}" for p, v in sorted(vals))
            report.append(f"triple product ({labels}) not symmetric: {detail}")
    if ring.rho_curves and linalg.rank(ring.div_curve) < ring.rho_curves:
        report.append("divisor-curve pairing is degenerate on the curve basis")
    return report


@dataclass(frozen=True)
class Threefold:
    """A ring together with its nef cone, canonical class and Todd class."""

    name: str
    ring: CohRing
    nef_cone: tuple[DivisorClass, ...] = ()
    canonical: DivisorClass | None = None
    td1: DivisorClass | None = None
    td2: CurveClass | None = None
    td3: Fraction | None = None
    chi: Fraction | None = None

    @property
    def has_todd(self) -> bool:
        return self.td1 is not None and self.td2 is not None and self.td3 is not None

    def diagnostics(self) -> list[str]:
        report = [f"ring: {msg}" for msg in validate_ring(self.ring)]
        if report:
            return report
        if self.nef_cone:
            mat = [g.coords for g in self.nef_cone]
            if linalg.rank(mat) < len(mat):
                report.append("nef cone generators are linearly dependent")
        if self.has_todd and self.chi is not None and self.td3 != self.chi:
            report.append(
                f"td3 = {format_rational(self.td3)} differs from chi = {format_rational(self.chi)}"
            )
        return report


PresetThreefold = Threefold


def ring_from_triples(
    name: str,
    labels: Sequence[str],
    triples: dict[tuple[int, ...], int | Fraction],
    curve_pairs: Sequence[tuple[int, int]],
) -> CohRing:
    """Build a ring from its nonzero triple products and a curve basis of divisor products.

    ``triples`` maps sorted index triples to intersection numbers; every
    other triple is zero.
    """
    rho = len(labels)

    def t(i, j, k):
        return Fraction(triples.get(tuple(sorted((i, j, k))), 0))

    pairing = [[t(k, a, b) for a, b in curve_pairs] for k in range(rho)]
    div_div = []
    for i in range(rho):
        row = []
        for j in range(rho):
            row.append(tuple(linalg.solve(pairing, [t(k, i, j) for k in range(rho)])))
        div_div.append(tuple(row))
    curve_labels = [
        f"{labels[a]}^2" if a == b else f"{labels[a]}*{labels[b]}" for a, b in curve_pairs
    ]
    return CohRing(tuple(labels), tuple(curve_labels), tuple(div_div), tuple(map(tuple, pairing)), name)


# name: (labels, triples, curve basis pairs, td1, td2, chi); K = -2*td1 and the
# nef cone is spanned by the basis divisors in every case.
_PRESET_DATA = {
    "P3": (("H",), {(0, 0, 0): 1}, [(0, 0)], (2,), (Fraction(11, 6),), 1),
    "Quadric3": (("H",), {(0, 0, 0): 2}, [(0, 0)], (Fraction(3, 2),), (Fraction(13, 12),), 1),
    "P1xP2": (
        ("h1", "h2"), {(0, 1, 1): 1}, [(0, 1), (1, 1)],
        (1, Fraction(3, 2)), (Fraction(3, 2), 1), 1,
    ),
    "P1xP1xP1": (
        ("h1", "h2", "h3"), {(0, 1, 2): 1}, [(1, 2), (0, 2), (0, 1)],
        (1, 1, 1), (1, 1, 1), 1,
    ),
    "PT_P2": (
        ("h1", "h2"), {(0, 0, 1): 1, (0, 1, 1): 1}, [(0, 0), (1, 1)],
        (1, 1), (Fraction(3, 2), Fraction(3, 2)), 1,
    ),
    "P1xAbelianSurface": (
        ("h", "theta"), {(0, 1, 1): 2}, [(0, 1), (1, 1)], (1, 0), (0, 0), 0,
    ),
    "P2xEllipticCurve": (
        ("h", "f"), {(0, 0, 1): 1}, [(0, 0), (0, 1)], (Fraction(3, 2), 0), (1, 0), 0,
    ),
    "P1xP1xEllipticCurve": (
        ("h1", "h2", "f"), {(0, 1, 2): 1}, [(1, 2), (0, 2), (0, 1)],
        (1, 1, 0), (0, 0, 1), 0,
    ),
}

PRESET_NAMES: tuple[str, ...] = tuple(_PRESET_DATA)

_preset_cache: dict[str, Threefold] = {}


def preset(name: str) -> Threefold:
    if name not in _PRESET_DATA:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    if name not in _preset_cache:
        labels, triples, pairs, td1, td2, chi = _PRESET_DATA[name]
        ring = ring_from_triples(name, labels, triples, pairs)
        td1c = ring.divisor(td1)
        _preset_cache[name] = Threefold(
            name=name,
            ring=ring,
            nef_cone=tuple(ring.basis_divisors()),
            canonical=td1c.scale(-2),
            td1=td1c,
            td2=ring.curve(td2),
            td3=Fraction(chi),
            chi=Fraction(chi),
        )
    return _preset_cache[name]


def all_presets() -> list[Threefold]:
    return [preset(n) for n in PRESET_NAMES]


# ---------------------------------------------------------------- JSON I/O

_BARE_NUMBER = re.compile(r'"(?:[^"\\]|\\.)*"|(-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)')


def _locate_bare_number(text: str) -> tuple[int, int]:
    for m in _BARE_NUMBER.finditer(text):
        if m.group(1) is not None:
            pos = m.start(1)
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            return line, col
    return 0, 0


class _BareNumber(Exception):
    pass


def _reject(_):
    raise _BareNumber()


def _rat(value, path: str) -> Fraction:
    if not isinstance(value, str):
        raise RingParseError(f"{path}: expected a \"p/q\" string, got {type(value).__name__}")
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise RingParseError(f"{path}: {exc}") from None


def _rat_list(value, path: str) -> tuple[Fraction, ...]:
    if not isinstance(value, list):
        raise RingParseError(f"{path}: expected a list")
    return tuple(_rat(v, f"{path}[{i}]") for i, v in enumerate(value))


def _labels(value, path: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise RingParseError(f"{path}: expected a list of strings")
    return tuple(value)


def loads_threefold(text: str) -> Threefold:
    """Read a custom ring document; all numbers must be "p/q" strings."""
    try:
        doc = json.loads(text, parse_int=_reject, parse_float=_reject, parse_constant=_reject)
    except json.JSONDecodeError as exc:
        raise RingParseError(exc.msg, exc.lineno, exc.colno) from None
    except _BareNumber:
        line, col = _locate_bare_number(text)
        raise RingParseError('numbers must be written as "p/q" strings', line, col) from None
    if not isinstance(doc, dict):
        raise RingParseError("top level must be an object")
    for key in ("divisor_basis", "curve_basis", "div_div", "div_curve"):
        if key not in doc:
            raise RingParseError(f"missing field {key!r}")
    div_div = doc["div_div"]
    if not isinstance(div_div, list) or not all(isinstance(r, list) for r in div_div):
        raise RingParseError("div_div: expected a list of lists")
    div_curve = doc["div_curve"]
    if not isinstance(div_curve, list):
        raise RingParseError("div_curve: expected a list")
    ring = CohRing(
        _labels(doc["divisor_basis"], "divisor_basis"),
        _labels(doc["curve_basis"], "curve_basis"),
        tuple(
            tuple(_rat_list(c, f"div_div[{i}][{j}]") for j, c in enumerate(row))
            for i, row in enumerate(div_div)
        ),
        tuple(_rat_list(row, f"div_curve[{i}]") for i, row in enumerate(div_curve)),
        name=str(doc.get("name", "custom")),
    )
    shape = ring.shape_errors()
    if shape:
        raise RingParseError("; ".join(shape))

    def div(value, path):
        coords = _rat_list(value, path)
        if len(coords) != ring.rho:
            raise RingParseError(f"{path}: expected {ring.rho} coordinates")
        return ring.divisor(coords)

    nef = tuple(div(g, f"nef_cone[{i}]") for i, g in enumerate(doc.get("nef_cone", [])))
    canonical = div(doc["canonical"], "canonical") if "canonical" in doc else None
    td1 = td2 = td3 = None
    if "todd" in doc:
        todd = doc["todd"]
        if not isinstance(todd, dict):
            raise RingParseError("todd: expected an object")
        td1 = div(todd.get("td1"), "todd.td1")
        c = _rat_list(todd.get("td2"), "todd.td2")
        if len(c) != ring.rho_curves:
            raise RingParseError(f"todd.td2: expected {ring.rho_curves} coordinates")
        td2 = ring.curve(c)
        td3 = _rat(todd.get("td3"), "todd.td3")
    chi = _rat(doc["chi"], "chi") if "chi" in doc else td3
    return Threefold(ring.name, ring, nef, canonical, td1, td2, td3, chi)


def load_threefold(path: str) -> Threefold:
    with open(path, encoding="utf-8") as fh:
        return loads_threefold(fh.read())


def threefold_to_dict(x: Threefold) -> dict:
    r = x.ring
    fr = format_rational
    doc = {
        "name": x.name,
        "divisor_basis": list(r.divisor_basis),
        "curve_basis": list(r.curve_basis),
        "div_div": [[[fr(v) for v in c] for c in row] for row in r.div_div],
        "div_curve": [[fr(v) for v in row] for row in r.div_curve],
        "nef_cone": [[fr(v) for v in g.coords] for g in x.nef_cone],
    }
    if x.canonical is not None:
        doc["canonical"] = [fr(v) for v in x.canonical.coords]
    if x.has_todd:
        doc["todd"] = {
            "td1": [fr(v) for v in x.td1.coords],
            "td2": [fr(v) for v in x.td2.coords],
            "td3": fr(x.td3),
        }
    if x.chi is not None:
        doc["chi"] = fr(x.chi)
    return doc


def dumps_threefold(x: Threefold) -> str:
    return json.dumps(threefold_to_dict(x), indent=2, sort_keys=True)
