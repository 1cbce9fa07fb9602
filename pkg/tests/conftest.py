import numpy as np
import pytest

from rtlocr import synth


@pytest.fixture(scope="session")
def base_typeface():
    return synth.load_typeface()


@pytest.fixture(scope="session")
def small_corpus(base_typeface):
    return synth.generate_corpus(base_typeface, synth.HIGH_QUALITY, 30, seed=11)


def random_posteriors(rng: np.random.Generator, t_len: int, k1: int) -> np.ndarray:
    y = rng.random((t_len, k1)) + 1e-3
    return y / y.sum(axis=1, keepdims=True)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
