from __future__ import annotations

import re
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tiltcheck.chern import ChernVector, Polarization, TwistedVector, v_vector
from tiltcheck.coh_ring import preset
from tiltcheck.numbers import QuadExt
from tiltcheck.stability import (
    Charge,
    Grid,
    central_charge,
    charge_s,
    cone_check,
    mu_slope,
    nu_difference_direct,
    nu_slope,
    wall_conic,
    wall_scan,
)
from conftest import rationals

P3 = preset("P3").ring
PT = preset("PT_P2").ring


def test_mu_slope():
    assert mu_slope(TwistedVector.of(0, 1, 5, 0)).is_infinite
    assert mu_slope(TwistedVector.of(2, 3, 0, 0)).value == F(3, 2)


@pytest.mark.parametrize("d", [-1, 0, 2])
@pytest.mark.parametrize("alpha", ["1", "1/2", "sqrt(3)"])
def test_mu_slope_of_line_bundle_on_p3(d, alpha):
    pol = Polarization(P3.divisor(1), alpha)
    assert mu_slope(v_vector(ChernVector.exp(P3.divisor(d)), pol)).value == d / pol.alpha


def test_nu_slope_infinite_cases():
    assert nu_slope(TwistedVector.of(1, 0, 3, 0)).is_infinite
    assert nu_slope(TwistedVector.of(0, 0, 0, 1)).is_infinite


@pytest.mark.parametrize("alpha", [F(1, 3), F(1, 2), F(1, 5), F(2)])
def test_nu_slope_of_o10_on_ptp2(alpha):
    pol = Polarization(PT.divisor(1, 2), QuadExt(alpha))
    nu = nu_slope(v_vector(ChernVector.exp(PT.divisor(1, 0)), pol)).value
    assert nu == (1 - 3 * alpha ** 2) / (8 * alpha)
    assert (nu.sign() > 0) == (alpha ** 2 < F(1, 3))


def test_nu_at_one_third_is_one_quarter():
    pol = Polarization(PT.divisor(1, 2), "1/3")
    assert nu_slope(v_vector(ChernVector.exp(PT.divisor(1, 0)), pol)).value == F(1, 4)


def test_central_charge_examples():
    pol = Polarization(P3.divisor(1), "1/2")
    z = central_charge(ChernVector.point(P3), pol)
    assert z.re == -1 and z.im == 0
    z = central_charge(ChernVector.exp(P3.zero_divisor()), pol)
    assert z.re == 0 and z.im == -F(1, 8) / 6
    assert central_charge(ChernVector.zero(P3), pol).is_zero()


def test_charge_s_examples():
    H = PT.divisor(1, 2)
    z = charge_s(ChernVector.exp(PT.divisor(1, 0)), F(1, 3), H, F(1, 18))
    assert z.re == F(4, 81) and z.im == F(2, 9)
    assert charge_s(ChernVector.point(PT), F(1, 3), H, F(1, 18)) == Charge(-1, 0)
    ch = ChernVector.from_coords(PT, 1, [3, -2], [0, 0], 0)
    assert charge_s(ch, F(1, 3), H, 0).re == 0


def test_cone_check_basics():
    anchor = Charge(1, 1)
    assert cone_check([anchor, anchor], anchor).holds
    assert cone_check([Charge(-1, -1)], anchor).holds
    assert not cone_check([Charge(1, -1)], anchor).holds
    verdict = cone_check([Charge(0, 0), Charge(-1, 2)], anchor)
    assert verdict.holds and verdict.anomalies == (0,)


@settings(max_examples=200, deadline=None)
@given(rationals(), rationals(), rationals(), rationals())
def test_cone_check_is_scale_invariant(a, b, c, d):
    anchor, z = Charge(a, b), Charge(c, d)
    if anchor.is_zero():
        return
    assert cone_check([z], anchor).holds == cone_check([z.scale(3)], anchor.scale(F(1, 2))).holds
    # z and -z are both in the closed cone only on the boundary line
    if not z.is_zero() and cone_check([z], anchor).holds and cone_check([-z], anchor).holds:
        assert (anchor.re * z.im - anchor.im * z.re) == 0


def test_degenerate_conic_for_equal_classes():
    e = ChernVector.exp(P3.divisor(1))
    conic = wall_conic(e, e, P3.divisor(1))
    assert conic.degenerate
    diag = wall_scan(e, e, P3.divisor(1), Grid(2, -2, 2, 5, 5))
    assert diag.degenerate
    assert {s for row in diag.signs for s in row} == {0}


PAIRS = [
    ("P3", ChernVector.exp(P3.zero_divisor()), ChernVector.exp(P3.divisor(1)), P3.divisor(1)),
    ("P3", ChernVector.point(P3), ChernVector.exp(P3.zero_divisor()), P3.divisor(1)),
    ("PT_P2", ChernVector.exp(PT.divisor(1, 0)), ChernVector.exp(PT.divisor(0, 1)), PT.divisor(1, 2)),
    ("PT_P2", ChernVector.exp(PT.divisor(-1, 1)), ChernVector.point(PT).scale(3), PT.divisor(2, 1)),
]


@pytest.mark.parametrize("name,e,f,H", PAIRS)
def test_scan_matches_direct_evaluation(name, e, f, H):
    grid = Grid(2, -2, 2, 10, 10)
    diag = wall_scan(e, f, H, grid)
    for i, a in enumerate(diag.alphas):
        for j, b in enumerate(diag.betas):
            assert diag.signs[i][j] == nu_difference_direct(e, f, H, a, b)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 3), rationals(0, 3).filter(lambda a: a > 0), rationals(-3, 3))
def test_conic_sign_matches_direct_at_random_points(k, alpha, beta):
    name, e, f, H = PAIRS[k]
    conic = wall_conic(e, f, H)
    assert conic.nu_difference_sign(alpha * alpha, beta) == nu_difference_direct(e, f, H, alpha, beta)


def test_single_node_grid():
    e, f = ChernVector.exp(P3.zero_divisor()), ChernVector.exp(P3.divisor(1))
    diag = wall_scan(e, f, P3.divisor(1), Grid(1, 0, 0, 1, 1))
    assert diag.signs == ((nu_difference_direct(e, f, P3.divisor(1), 1, 0),),)


def test_scan_is_deterministic_across_orders():
    e, f, H = PAIRS[2][1:]
    grid = Grid(2, -2, 2, 12, 9)
    docs = {wall_scan(e, f, H, grid, order).to_json() for order in ("row", "column", "reverse")}
    assert len(docs) == 1


def test_svg_output():
    e, f, H = PAIRS[0][1:]
    svg = wall_scan(e, f, H, Grid(2, -2, 2, 20, 20)).to_svg()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert len(re.findall(r"<rect ", svg)) >= 400
    assert "<polyline" in svg
    svg = wall_scan(e, e, H, Grid(2, -2, 2, 5, 5)).to_svg()
    assert "degenerate" in svg
