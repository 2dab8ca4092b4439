import time

import pytest

SESSION = {}


def pytest_sessionstart(session):
    SESSION["start"] = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    # the wall-clock criterion has to see everything else finish first
    last = [it for it in items if it.name == "test_criterion_10_suite_runtime"]
    items[:] = [it for it in items if it not in last] + last


@pytest.fixture
def session_elapsed():
    return lambda: time.perf_counter() - SESSION["start"]
