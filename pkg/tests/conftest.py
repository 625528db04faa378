import pytest

from relprop.fixtures import load_t1
from relprop.miner import MiningConfig, mine
from relprop.propmat import build_matrix

_acceptance: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        prev = _acceptance.get(number)
        if prev is None or prev[1] == "PASS":
            _acceptance[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, status = _acceptance[number]
        terminalreporter.write_line(f"[{status}] {number}. {title}")


@pytest.fixture(scope="session")
def t1():
    return load_t1()


@pytest.fixture(scope="session")
def t1_features(t1):
    return mine(t1, MiningConfig(0.25, 2, t1.bias))


@pytest.fixture(scope="session")
def t1_matrix(t1, t1_features):
    return build_matrix(t1, t1_features)
