import pytest

from tests.helpers import direct_run


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full sweep and multi-user acceptance runs")


@pytest.fixture
def golden_time_shared():
    return direct_run("time_shared")


@pytest.fixture
def golden_space_shared():
    return direct_run("space_shared")
