import pytest

from leobf.coverage import build_scenario, enhancement_map
from leobf.impairments import DopplerSweepConfig, doppler_enhancement_sweep

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Append ``(criterion, passed, detail)``; printed in the terminal summary.

    ``passed`` may be None for criteria that are excluded rather than tested.
    """
    return request.config.stash[_ACCEPTANCE]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    labels = {True: "PASS", False: "FAIL", None: "SKIP"}
    for name, passed, detail in sorted(lines, key=lambda r: r[0]):
        terminalreporter.write_line(f"{labels[passed]}  {name}: {detail}")


@pytest.fixture(scope="session")
def case2_map():
    return enhancement_map(build_scenario("two_parallel"))


@pytest.fixture(scope="session")
def case4_map():
    return enhancement_map(build_scenario("four_parallel"))


@pytest.fixture(scope="session")
def case5_map():
    return enhancement_map(build_scenario("four_perpendicular"))


@pytest.fixture(scope="session")
def case6_map():
    return enhancement_map(build_scenario("four_intersecting"))


@pytest.fixture(scope="session")
def default_sweep():
    return doppler_enhancement_sweep(DopplerSweepConfig())
