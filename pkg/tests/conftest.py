import numpy as np
import pytest

from gptm import compose, make_classical, make_quantum
from gptm.rng import make_rng


@pytest.fixture
def qubit():
    return make_quantum(2)


@pytest.fixture
def qq(qubit):
    return compose(qubit, qubit)


@pytest.fixture
def bit():
    return make_classical(2)


@pytest.fixture
def rng():
    return make_rng(1234)


BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance") or sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
