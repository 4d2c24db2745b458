import random
from fractions import Fraction

from hypothesis import settings, strategies as st

from proxalg import core

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
rationals = st.builds(Fraction, st.integers(-24, 24), st.integers(1, 6))
unit = st.builds(lambda k, n: Fraction(k % (n + 1), n), st.integers(0, 64), st.sampled_from([2, 4, 8, 16]))


@st.composite
def regopens(draw, denom=16, max_parts=3):
    return core.random_regopen(random.Random(draw(seeds)), denom, max_parts)


def rng_of(seed):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
