import pytest

from formwdp.scenario_io import bundled_scenario

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def no_lump():
    return bundled_scenario("humira-no-lump")


@pytest.fixture(scope="session")
def lump():
    return bundled_scenario("humira-lump")


@pytest.fixture(scope="session")
def menu_scenario():
    return bundled_scenario("humira-menu")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
