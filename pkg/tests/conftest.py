import numpy as np
import pytest

from spintomo.group_param import haar_sample


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def equal_up_to_sign(a, b, atol):
    return np.allclose(a, b, atol=atol, rtol=0) or np.allclose(a, -b, atol=atol, rtol=0)


@pytest.fixture
def haar_batch(rng):
    return haar_sample(rng, 500)


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
