import random

import pytest

from cga import corpus
from cga.closure import closure_cache_clear
from cga.dominoes import compile_domino_game
from cga.seeds import extract_seed

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    label = dict(report.user_properties).get("criterion")
    if label is not None:
        _criteria.append((label, report.outcome, report.duration))


def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, duration in _criteria:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {label}  ({duration:.2f} s)")


@pytest.fixture(autouse=True)
def _fresh_closure_cache():
    closure_cache_clear()
    yield


@pytest.fixture(scope="session")
def fig2a():
    return corpus.load("fig2a.domino")


@pytest.fixture(scope="session")
def fig2a_game(fig2a):
    return compile_domino_game(fig2a)


@pytest.fixture(scope="session")
def fig2a_seed(fig2a_game):
    return extract_seed(fig2a_game)


@pytest.fixture(scope="session")
def fig1_game():
    return corpus.load("fig1.game")


@pytest.fixture
def rng():
    return random.Random(20240611)
