import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def dyadic_fractions(bits=30, lo=0, hi=1):
    """Fractions k/2^bits in [lo, hi]."""
    n = 2**bits
    return st.integers(int(lo * n), int(hi * n)).map(lambda k: Fraction(k, n))


def rationals(lo, hi, max_den=1000):
    """Fractions p/q in the closed interval [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)

    def build(pair):
        q, t = pair
        return lo + (hi - lo) * Fraction(t, q)

    return st.integers(1, max_den).flatmap(lambda q: st.tuples(st.just(q), st.integers(0, q))).map(build)


@pytest.fixture(scope="session")
def sqrt2():
    from takagi_extrema import nth_root

    return nth_root(2, 2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
