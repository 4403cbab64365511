import pytest

from bvbfv.suites import Workspace


@pytest.fixture(scope="session")
def ws():
    return Workspace()


@pytest.fixture(scope="session")
def cs(ws):
    return ws.theory("cs")


@pytest.fixture(scope="session")
def bf(ws):
    return ws.theory("bf")


@pytest.fixture(scope="session")
def ym2(ws):
    return ws.theory("ym2")


@pytest.fixture(scope="session")
def psm(ws):
    return ws.theory("psm-linear")
