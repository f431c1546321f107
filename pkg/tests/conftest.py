import pytest
from hypothesis import HealthCheck, settings

from ssmthom import fixtures as fx
from ssmthom.interpolation import solve
from ssmthom.singularities import EMPTY

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def sl1():
    return fx.sl1_table()


@pytest.fixture(scope="session")
def rl1():
    return fx.rl1_table()


@pytest.fixture(scope="session")
def master():
    return fx.master_l1()


@pytest.fixture(scope="session")
def solved_master_l1():
    table, report = solve(EMPTY, 1, 6)
    return table[EMPTY], report


@pytest.fixture(scope="session")
def solved_tower_l1():
    return solve("A0^6", 1, 6)
