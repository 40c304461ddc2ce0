import numpy as np
import pytest

from grandsec.code import sample_rlc


@pytest.fixture(scope="session")
def code_16_11():
    return sample_rlc(16, 11, 5)


@pytest.fixture(scope="session")
def code_8_4():
    return sample_rlc(8, 4, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
