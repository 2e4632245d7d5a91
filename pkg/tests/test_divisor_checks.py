from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tiltcheck.coh_ring import PRESET_NAMES, preset
from tiltcheck.divisor_checks import (
    Numbers,
    PreconditionError,
    UndefinedError,
    cone_coordinates,
    hodge_chain,
    hodge_chain_numbers,
    is_ample,
    is_nef,
    neg_divisor_test,
    neg_test_numbers,
)
from conftest import preset_names, rationals

PT = preset("PT_P2")
P12 = preset("P1xP2")


def test_nef_membership():
    h1, h2 = PT.ring.basis_divisors()
    assert is_nef(h1, PT)
    assert is_nef(h1 + h2, PT)
    assert not is_ample(h1, PT)
    assert is_ample(h1 + h2, PT)
    assert not is_nef(-P12.ring.basis_divisor(0), P12)


def test_cone_coordinates():
    d = PT.ring.divisor(2, F(1, 3))
    assert cone_coordinates(d, PT.nef_cone) == (2, F(1, 3))


def test_neg_test_example_on_p1xp2():
    h1, h2 = P12.ring.basis_divisors()
    res = neg_divisor_test(h1, h1 + h2, P12)
    assert res.holds is False
    assert res.lhs == 0 and res.rhs == F(1, 36)
    assert Numbers.of(h1, h1 + h2) == Numbers(3, 1, 0, 0)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_neg_test_equality_case(name):
    x = preset(name)
    H = sum(x.nef_cone[1:], x.nef_cone[0])
    holds, lhs, rhs = neg_divisor_test(H, H, x)
    assert not holds and lhs == rhs == H.cube()


def test_neg_test_undefined_and_preconditions():
    with pytest.raises(UndefinedError):
        neg_test_numbers(Numbers(1, 0, 0, 0))
    h1, h2 = PT.ring.basis_divisors()
    with pytest.raises(PreconditionError):
        neg_divisor_test(h1, h1, PT)
    with pytest.raises(PreconditionError):
        hodge_chain(h1 - h2, h1 + h2, PT)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_hodge_chain_equality_at_d_equal_h(name):
    x = preset(name)
    H = sum(x.nef_cone[1:], x.nef_cone[0])
    rep = hodge_chain(H, H, x)
    assert rep.all_hold
    assert all(i.lhs == i.rhs for i in rep.main)


def test_hodge_chain_example_on_p1xp2():
    h1, h2 = P12.ring.basis_divisors()
    rep = hodge_chain(h1, h1 + h2, P12)
    assert rep.all_hold
    assert (rep.h1.lhs, rep.h1.rhs) == (1, 0)
    assert (rep.h2.lhs, rep.h2.rhs) == (0, 0)
    assert (rep.h3.lhs, rep.h3.rhs) == (1, 0)
    assert all(step.holds is None for step in rep.h5_steps)


def test_hodge_chain_zero_divisor():
    rep = hodge_chain(PT.ring.zero_divisor(), PT.ring.divisor(1, 1), PT)
    assert rep.all_hold


@st.composite
def nef_and_ample(draw):
    x = preset(draw(preset_names))
    d = x.ring.divisor([draw(rationals(0, 5)) for _ in range(x.ring.rho)])
    H = x.ring.divisor([draw(rationals(0, 5)) + F(1, 7) for _ in range(x.ring.rho)])
    return x, d, H


@settings(max_examples=300, deadline=None)
@given(nef_and_ample())
def test_hodge_chain_and_neg_test_on_nef_divisors(xdh):
    x, d, H = xdh
    assert hodge_chain(d, H, x).all_hold
    if Numbers.of(d, H).p != 0:
        assert not neg_divisor_test(d, H, x).holds


@settings(max_examples=100, deadline=None)
@given(nef_and_ample(), rationals(0, 4).filter(bool), rationals(0, 4).filter(bool))
def test_neg_test_scale_consistent(xdh, lam, mu):
    x, d, H = xdh
    if Numbers.of(d, H).p == 0:
        return
    assert neg_divisor_test(d, H, x).holds == neg_divisor_test(d.scale(lam), H.scale(mu), x).holds


def test_chain_numbers_are_pure():
    rep = hodge_chain_numbers(Numbers(1, 1, 1, 1))
    assert rep.all_hold
    assert [i.name for i in rep.main] == ["h1", "h2", "h3", "h4", "h5"]
