from __future__ import annotations

import itertools
import json
from fractions import Fraction as F
from math import comb

import pytest
import sympy
from hypothesis import given, settings

from tiltcheck.chern import ChernVector
from tiltcheck.coh_ring import (
    PRESET_NAMES,
    CohRing,
    DimensionError,
    RingMismatchError,
    RingParseError,
    dumps_threefold,
    integrate,
    loads_threefold,
    mul_div_div,
    preset,
    threefold_to_dict,
    triple,
    validate_ring,
)
from tiltcheck.ptp2 import euler_pairing
from conftest import preset_and_divisor

# Independent models: polynomial rings modulo monomial relations, with the
# degree functional read off the top monomial.  P(T_P2) is cut out of
# P2 x P2 by a (1,1) divisor, so its products are multiplied by h1 + h2.
x1, x2, x3 = sympy.symbols("x1 x2 x3")
MODELS = {
    "P3": ((x1,), {x1: 3}, x1 ** 3, 1, 1),
    "Quadric3": ((x1,), {x1: 3}, x1 ** 3, 2, 1),
    "P1xP2": ((x1, x2), {x1: 1, x2: 2}, x1 * x2 ** 2, 1, 1),
    "P1xP1xP1": ((x1, x2, x3), {x1: 1, x2: 1, x3: 1}, x1 * x2 * x3, 1, 1),
    "PT_P2": ((x1, x2), {x1: 2, x2: 2}, x1 ** 2 * x2 ** 2, 1, x1 + x2),
    "P1xAbelianSurface": ((x1, x2), {x1: 1, x2: 2}, x1 * x2 ** 2, 2, 1),
    "P2xEllipticCurve": ((x1, x2), {x1: 2, x2: 1}, x1 ** 2 * x2, 1, 1),
    "P1xP1xEllipticCurve": ((x1, x2, x3), {x1: 1, x2: 1, x3: 1}, x1 * x2 * x3, 1, 1),
}


def model_triple(name, i, j, k):
    gens, max_exp, top, value, cut = MODELS[name]
    poly = sympy.Poly(sympy.expand(gens[i] * gens[j] * gens[k] * cut), *gens)
    total = 0
    for monom, coeff in poly.terms():
        if all(e <= max_exp[g] for e, g in zip(monom, gens)) and sympy.Poly(top, *gens).monoms()[0] == monom:
            total += coeff
    return F(int(total * value))


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_triples_match_independent_model(name):
    x = preset(name)
    b = x.ring.basis_divisors()
    for i, j, k in itertools.product(range(x.ring.rho), repeat=3):
        assert triple(b[i], b[j], b[k]) == model_triple(name, i, j, k), (i, j, k)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_validate(name):
    assert validate_ring(preset(name).ring) == []
    assert preset(name).diagnostics() == []


def test_ptp2_relations():
    r = preset("PT_P2").ring
    h1, h2 = r.basis_divisors()
    assert r.rho == 2
    assert integrate(r, h1, mul_div_div(r, h1, h2)) == 1
    assert integrate(r, h2, h1 * h2) == 1
    assert h1 * (h1 * h1) == 0 and h2.cube() == 0


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 5), (3, 1)])
def test_ptp2_volume(a, b):
    r = preset("PT_P2").ring
    H = r.divisor(a, b)
    assert H * (H * H) == 3 * a * b * (a + b)


def test_p3_and_product_basics():
    r = preset("P3").ring
    assert r.rho == 1 and r.divisor(1).cube() == 1
    r = preset("P1xP2").ring
    h1, _ = r.basis_divisors()
    assert (h1 * h1).is_zero()
    assert (h1 * r.zero_divisor()).is_zero()


def test_td3_of_ptp2():
    assert preset("PT_P2").td3 == 1


def test_asymmetric_ring_is_reported():
    r = preset("P1xP2").ring
    dd = [list(row) for row in r.div_div]
    dd[0][1] = (F(1), F(1))
    bad = CohRing(r.divisor_basis, r.curve_basis, tuple(map(tuple, dd)), r.div_curve, "bad")
    report = validate_ring(bad)
    assert report
    assert any("(h1,h1,h2)" in line or "commutative" in line for line in report)


def test_dimension_and_mismatch_errors():
    r = preset("P3").ring
    with pytest.raises(DimensionError):
        r.divisor(1, 2)
    with pytest.raises(RingMismatchError):
        r.divisor(1) + preset("Quadric3").ring.divisor(1)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_json_round_trip(name):
    x = preset(name)
    y = loads_threefold(dumps_threefold(x))
    assert y.ring == x.ring
    assert y.nef_cone == x.nef_cone and y.td2 == x.td2 and y.td3 == x.td3
    assert validate_ring(y.ring) == []


def test_json_rejects_bare_numbers_with_position():
    doc = threefold_to_dict(preset("P3"))
    text = json.dumps(doc, indent=2).replace('"td3": "1/1"', '"td3": 1')
    with pytest.raises(RingParseError) as info:
        loads_threefold(text)
    assert "line" in str(info.value) and "column" in str(info.value)


def test_json_syntax_error_position():
    with pytest.raises(RingParseError) as info:
        loads_threefold('{\n   "name": }')
    assert "line 2" in str(info.value)


# Hirzebruch-Riemann-Roch against known Euler characteristics of line bundles.
def _chi_oracle(name, c):
    if name == "P3":
        return comb(c[0] + 3, 3)
    if name == "Quadric3":
        d = c[0]
        return F((d + 1) * (d + 2) * (2 * d + 3), 6)
    if name == "P1xP2":
        return (c[0] + 1) * comb(c[1] + 2, 2)
    if name == "P1xP1xP1":
        return (c[0] + 1) * (c[1] + 1) * (c[2] + 1)
    if name == "P1xAbelianSurface":
        return (c[0] + 1) * c[1] ** 2
    if name == "P2xEllipticCurve":
        return comb(c[0] + 2, 2) * c[1]
    if name == "P1xP1xEllipticCurve":
        return (c[0] + 1) * (c[1] + 1) * c[2]
    raise KeyError(name)


@pytest.mark.parametrize("name", [n for n in PRESET_NAMES if n != "PT_P2"])
def test_riemann_roch_on_products(name):
    x = preset(name)
    o = ChernVector.exp(x.ring.zero_divisor())
    for c in itertools.product(range(0, 3), repeat=x.ring.rho):
        line = ChernVector.exp(x.ring.divisor(c))
        assert euler_pairing(o, line, x) == _chi_oracle(name, c), c


@settings(max_examples=60, deadline=None)
@given(preset_and_divisor(), preset_and_divisor())
def test_product_is_commutative_and_bilinear(xd, ye):
    x, d = xd
    e = x.ring.divisor([2 * c - 1 for c in d.coords])
    assert d * e == e * d
    assert (d + e) * d == d * d + e * d
    assert d * (e * e) == e * (d * e)
