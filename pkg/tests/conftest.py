from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from egalmatch.core import Instance

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

COUNTEREXAMPLE = [[5, 2, 1], [3, 3, 2], [2, 5, 1]]


def inst(rows, T=1):
    return Instance.from_rows(rows, T)


@pytest.fixture
def counterexample():
    """Three agents for which no sequence is optimal at both rounds 1 and 2."""
    return lambda T=2: inst(COUNTEREXAMPLE, T)


def F(x):
    return Fraction(x)


# criterion number -> (passed, seconds, title); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, float, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, secs, title = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {secs:7.2f}s  {title}")
