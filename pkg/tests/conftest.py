import pytest

from pathopt import graph as _graph


def pytest_addoption(parser):
    parser.addoption("--run-nightly", action="store_true", help="run hours-scale statistical acceptance checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-nightly"):
        return
    skip = pytest.mark.skip(reason="nightly run; pass --run-nightly")
    for item in items:
        if "nightly" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="module")
def debug_checks():
    old = _graph.DEBUG_CHECKS
    _graph.DEBUG_CHECKS = True
    yield
    _graph.DEBUG_CHECKS = old
