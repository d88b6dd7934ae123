import numpy as np
import pytest

from noisyhk import ModelConfig, NoiseModel, OpinionState

ACCEPTANCE_LINES = {}


def record(criterion: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k.split()[1].rstrip(":"))):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def plain():
    def make(n, epsilon=0.2, noise=None):
        return ModelConfig("plain", n, epsilon, noise or NoiseModel.zero())
    return make


def state_of(config, values):
    return OpinionState.initial(config, np.asarray(values, dtype=float))
