"""The eight acceptance criteria at full sample counts and stated tolerances."""

import warnings

import pytest

from conftest import ACCEPTANCE_LINES
from multigamma.acceptance import CRITERIA
from multigamma.errors import SlowConvergenceWarning


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SlowConvergenceWarning)
        res = criterion(scale=1.0, seed=0)
    line = res.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert res.passed, "\n".join([line] + [str(f) for f in res.failures[:10]])
