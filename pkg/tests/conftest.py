import random

import pytest
from hypothesis import settings

from gxsperner.restrictions import Edge, RestrictionSystem

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = getattr(report, "criterion", None)
    if marker is not None:
        number, text = marker
        _criteria[number] = ("PASS" if report.passed else "FAIL", text)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report.criterion = marker.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, text = _criteria[number]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {text}")


def random_system(n: int, rng: random.Random, density: float | None = None) -> RestrictionSystem:
    """A random valid restriction system on [n]."""
    if density is None:
        density = rng.random()
    edges = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            if rng.random() < density:
                edges.append(Edge(i, j, rng.randint(0, min(i, n - j))))
    return RestrictionSystem(n, tuple(edges))


@pytest.fixture
def rng():
    return random.Random(20261017)
