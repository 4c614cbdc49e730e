import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def complex_in(re=(-1.0, 1.0), im=(-1.0, 1.0)):
    return st.builds(complex, st.floats(*re), st.floats(*im))


def polar(mod=(0.5, 2.0)):
    return st.builds(lambda m, a: m * complex(math.cos(a), math.sin(a)),
                     st.floats(*mod), st.floats(0, 2 * math.pi))


def upper(re=(-0.5, 0.5), im=(0.6, 1.4)):
    return complex_in(re, im)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
