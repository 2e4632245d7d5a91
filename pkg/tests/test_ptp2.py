from __future__ import annotations

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tiltcheck import ptp2
from tiltcheck.chern import ChernVector
from tiltcheck.coh_ring import preset
from tiltcheck.numbers import QuadExt

R = ptp2.threefold().ring


def test_line_bundle_character():
    assert ptp2.ch_line_bundle(0, 0) == ChernVector.exp(R.zero_divisor())
    assert ptp2.ch_line_bundle(1, 1).ch3 == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(-4, 4), st.integers(-4, 4))
def test_closed_forms_against_ring(a, b, k, l):
    f1, f2, f3 = ptp2.lemma_chcomp_report(a, b, k, l)
    assert f1.match and f3.match
    assert f1.ring == l * a * a + 2 * (k + l) * a * b + k * b * b
    assert f3.ring == F(k * l * (k + l), 2)
    assert f2.paper == 2 * f2.ring
    assert ptp2.volume(a, b) == 3 * a * b * (a + b)


def test_factor_two_example():
    f2 = ptp2.lemma_chcomp_report(1, 2, 1, 0)[1]
    assert (f2.paper, f2.ring, f2.ratio) == (2, 1, 2)
    assert not f2.match


def test_alpha0_examples():
    assert ptp2.alpha0(1, 2, "paper") == QuadExt.sqrt(F(2, 3))
    for a in (1, 2, 5):
        assert ptp2.alpha0(a, a, "paper") == F(1, a)
    # the ring threshold implies the heart bound alpha^2 < 1/3 for (1, 2)
    assert ptp2.alpha0_squared(1, 2, "ring") <= F(1, 3)
    assert ptp2.alpha0_squared(1, 2, "ring") == F(1, 6)


def test_ring_alpha0_is_minimum_of_bounds():
    for a, b in itertools.combinations(range(1, 6), 2):
        bounds = ptp2.alpha0_bounds(a, b, "ring")
        assert ptp2.alpha0_squared(a, b, "ring") == min(bounds.values())
        # the closed-form bounds for the three heart conditions are doubled
        paper = ptp2.alpha0_bounds(a, b, "paper")
        assert paper["Im Z(O(0,-1)) > 0"] == 2 * bounds["Im Z(O(0,-1)) > 0"]


def test_heart_membership_examples():
    assert ptp2.heart_membership(1, 0, 0, 1, 2, F(1, 3)) == "in_heart"
    assert ptp2.heart_membership(0, 0, 1, 1, 2, F(1, 3)) == "in_heart"
    assert ptp2.heart_membership(0, 0, 0, 1, 2, F(1, 3)) == "not_in_heart"


def test_heart_boundary():
    # Im Z(O(1,0)) = alpha (b/2 - alpha^2 ab(a+b)/2) vanishes at alpha^2 = 1/3 for (1,2)
    assert ptp2.heart_membership(1, 0, 0, 1, 2, QuadExt.sqrt(F(1, 3))) == "boundary"


@pytest.mark.parametrize("a,b", [(1, 2), (1, 3), (2, 3), (2, 5), (4, 5)])
@pytest.mark.parametrize("frac", [F(1, 2), F(9, 10)])
def test_ring_convention_hearts_and_cone(a, b, frac):
    alpha = ptp2.alpha0(a, b, "ring") * frac
    for (k, l), n in ptp2.PROOF_PLACEMENT.items():
        assert ptp2.heart_membership(k, l, n, a, b, alpha, "ring") == "in_heart"
    assert ptp2.charge_cone_check(a, b, alpha, convention="ring").holds


def test_charge_cone_witnesses():
    rep = ptp2.charge_cone_check(1, 2, F(1, 3), F(1, 18), "ring")
    assert rep.holds
    z = rep.charges[ptp2.COLLECTION.index(ptp2.CollectionItem((1, 0), 0))]
    assert (z.re, z.im) == (F(4, 81), F(2, 9))
    rep = ptp2.charge_cone_check(1, 2, F(1, 3), F(1, 18), "paper")
    assert rep.holds
    z = rep.charges[ptp2.COLLECTION.index(ptp2.CollectionItem((1, 0), 0))]
    assert z.im == F(5, 9)


def test_charge_cone_at_threshold_fails():
    alpha = ptp2.alpha0(1, 2, "ring")
    rep = ptp2.charge_cone_check(1, 2, alpha, convention="ring")
    assert not rep.holds
    assert rep.preconditions


def test_paper_convention_gap():
    # alpha^2 = 0.81 * 2/(a(a+b)) exceeds 2/(b(a+b)) once b/a > 1/0.81
    alpha = ptp2.alpha0(1, 2, "paper") * F(9, 10)
    assert ptp2.heart_membership(0, -1, 2, 1, 2, alpha, "paper") != "in_heart"


def test_decomposition():
    assert ptp2.decompose_skyscraper() == (1, 2, 1, 1, 2, 1)
    assert ptp2.decompose(ptp2.ch_line_bundle(1, 0)) == (0, 0, 0, 0, 0, 1)
    assert ptp2.decompose(ChernVector.zero(R)) == (0,) * 6


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_decompose_recombine_round_trip(n):
    assert ptp2.decompose(ptp2.recombine(n)) == tuple(n)


def test_euler_pairing_oracles():
    o = ChernVector.exp(R.zero_divisor())
    assert ptp2.euler_pairing(o, o) == 1
    assert ptp2.euler_pairing(o, ptp2.ch_line_bundle(1, 0)) == 3
    assert ptp2.euler_pairing(o, ChernVector.point(R)) == 1


@pytest.mark.parametrize("k,l", [(1, 0), (0, 1), (2, 0), (-1, 0), (-2, 0)])
def test_euler_of_pullbacks_from_p2(k, l):
    # O(k,0) and O(0,l) are pulled back from P^2 along a P^1-bundle
    d = k + l
    o = ChernVector.exp(R.zero_divisor())
    assert ptp2.euler_pairing(o, ptp2.ch_line_bundle(k, l)) == F((d + 1) * (d + 2), 2)


def test_euler_pairing_needs_todd():
    x = preset("P3")
    bare = type(x)(name="bare", ring=x.ring)
    o = ChernVector.exp(x.ring.zero_divisor())
    with pytest.raises(ptp2.MissingToddError):
        ptp2.euler_pairing(o, o, bare)
