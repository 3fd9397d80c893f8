import numpy as np
import pytest
from hypothesis import settings

from siss.generators import make_generator

settings.register_profile("fixed", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("fixed")


@pytest.fixture(scope="session")
def sinc():
    return make_generator("sinc")


@pytest.fixture(scope="session")
def meyer():
    return make_generator("meyer")


@pytest.fixture(scope="session")
def q4():
    return make_generator("bspline", 4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
