from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from tiltcheck.coh_ring import PRESET_NAMES, preset


def rationals(lo: int = -4, hi: int = 4, max_den: int = 6):
    return st.builds(
        lambda n, d: Fraction(n, d),
        st.integers(lo * max_den, hi * max_den),
        st.integers(1, max_den),
    )


preset_names = st.sampled_from(PRESET_NAMES)


@st.composite
def divisors(draw, x, lo=-3, hi=3):
    return x.ring.divisor([draw(rationals(lo, hi)) for _ in range(x.ring.rho)])


@st.composite
def preset_and_divisor(draw):
    x = preset(draw(preset_names))
    return x, draw(divisors(x))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
