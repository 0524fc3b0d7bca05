from __future__ import annotations

import sys

import mpmath
import pytest

from qtb.params import default_exact, default_float

# a generic twist inside the convergence disc |p/q| < 1
P_TWIST = mpmath.mpc("0.18", "0.05")


@pytest.fixture(scope="session")
def exact():
    return default_exact()


@pytest.fixture(scope="session")
def flt():
    return default_float(40)


@pytest.fixture(scope="session")
def p_twist():
    return P_TWIST


def pytest_terminal_summary(terminalreporter):
    """Print the one-line verdicts collected by test_acceptance.py."""
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        terminalreporter.write_line(results[key])
