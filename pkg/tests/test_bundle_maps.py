from __future__ import annotations

from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tiltcheck.bundle_maps import (
    CASES,
    ch3_twist_identity,
    expected_rank,
    frobenius_pullback,
    p1_frobenius_twists,
    p2_frobenius_twists,
    toric_split_summands,
)
from tiltcheck.chern import ChernVector
from tiltcheck.coh_ring import preset
from conftest import divisors, preset_names, rationals

P3 = preset("P3").ring


def _random_chern(data, r):
    return ChernVector.from_coords(
        r,
        data.draw(rationals()),
        [data.draw(rationals()) for _ in range(r.rho)],
        [data.draw(rationals()) for _ in range(r.rho_curves)],
        data.draw(rationals()),
    )


def test_pullback_examples():
    c = ChernVector.from_coords(P3, 1, [F(1, 2)], [3], F(-1, 7))
    assert frobenius_pullback(c, 1) == c
    assert frobenius_pullback(c, 2) == ChernVector.from_coords(P3, 1, [2], [48], F(-64, 7))
    with pytest.raises(ValueError):
        frobenius_pullback(c, 0)


@settings(max_examples=60, deadline=None)
@given(preset_names, st.integers(1, 4), st.integers(1, 4), st.data())
def test_pullback_composes(name, m, n, data):
    c = _random_chern(data, preset(name).ring)
    assert frobenius_pullback(frobenius_pullback(c, m), n) == frobenius_pullback(c, m * n)


@settings(max_examples=40, deadline=None)
@given(preset_names, st.integers(1, 3), st.data())
def test_pullback_of_line_bundle_is_power(name, m, data):
    x = preset(name)
    d = data.draw(divisors(x))
    assert frobenius_pullback(ChernVector.exp(d), m) == ChernVector.exp(d.scale(m * m))


def test_twist_identity_trivial_cases():
    o = ChernVector.exp(P3.zero_divisor())
    t = ch3_twist_identity(o, P3.zero_divisor(), 2, 3)
    assert t.lhs == t.rhs == 0
    d = P3.divisor(F(2, 3))
    lhs, rhs, equal = ch3_twist_identity(o, d, 1, 1)
    assert equal and lhs == -d.cube() / 6


@settings(max_examples=100, deadline=None)
@given(preset_names, st.integers(1, 3), st.integers(1, 3), st.data())
def test_twist_identity_random(name, m, q, data):
    x = preset(name)
    e = _random_chern(data, x.ring)
    assert ch3_twist_identity(e, data.draw(divisors(x)), m, q).equal


def test_split_case_one_example():
    res = toric_split_summands("p1a", [1], 2)
    got = sorted((s.fiber_twist[0], s.base_exponent[0]) for s in res.summands)
    assert got == [(-1, 2), (-1, 3), (0, 0), (0, 1)]
    assert res.rank == 4
    res = toric_split_summands("P1BundleOverA", 0, 1)
    assert [(s.fiber_twist, s.base_exponent) for s in res.summands] == [((0,), (0,))]


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_split_case_one_multisets(m):
    n = m * m
    for a in range(n):
        res = toric_split_summands("p1a", [a], m)
        assert res.fiber_twists() == +Counter({(0,): a + 1, (-1,): n - a - 1})


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_split_rank_conservation(case, m):
    degs = [5, -3] if case == "P1xP1BundleOverC" else [7]
    res = toric_split_summands(case, degs, m)
    assert res.rank == expected_rank(case, m)


@settings(max_examples=100, deadline=None)
@given(st.integers(-20, 20), st.integers(1, 5))
def test_p1_twists_match_monomial_count(a, n):
    # the pushforward keeps h^0 and splits into nearly equal degrees
    twists = p1_frobenius_twists(a, n)
    assert sum(t + 1 for t in twists) == a + 1
    assert max(twists) - min(twists) <= 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.integers(1, 3))
def test_p2_twists_preserve_sections(a, n):
    twists = p2_frobenius_twists(a, n)
    assert sum((t + 1) * (t + 2) // 2 for t in twists.values() if t >= 0) == (a + 1) * (a + 2) // 2


@settings(max_examples=60, deadline=None)
@given(st.integers(-30, 30), st.integers(1, 4))
def test_large_degrees_extract_twist(a, m):
    res = toric_split_summands("p1a", [a], m)
    assert res.absolute_fiber_twists() == Counter((t,) for t in p1_frobenius_twists(a, m * m))


def test_split_errors():
    with pytest.raises(ValueError):
        toric_split_summands("nope", [1], 2)
    with pytest.raises(ValueError):
        toric_split_summands("p1p1c", [1], 2)
    with pytest.raises(ValueError):
        toric_split_summands("p1a", [1], 0)
