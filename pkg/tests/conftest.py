import numpy as np
import pytest

from minekrige import CorrelogramModel, build_lambda, builtin_table1, precompute

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS = {}


@pytest.fixture(scope="session")
def table1():
    return builtin_table1()


@pytest.fixture(scope="session")
def model():
    return CorrelogramModel()


@pytest.fixture(scope="session")
def lam(table1, model):
    return build_lambda(table1, model)


@pytest.fixture(scope="session")
def pre(lam):
    return precompute(lam)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
