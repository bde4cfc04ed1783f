import pytest
from hypothesis import HealthCheck, settings

from tiltquiver.formats import load_fixture

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("default")


@pytest.fixture(scope="session")
def A2():
    return load_fixture("A2")


@pytest.fixture(scope="session")
def EX49A():
    return load_fixture("EX49A")


@pytest.fixture(scope="session")
def EX49B():
    return load_fixture("EX49B")


@pytest.fixture(scope="session")
def EX65A():
    return load_fixture("EX65A")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
