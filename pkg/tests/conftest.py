from __future__ import annotations

import pytest

import helpers
from slimfork import GridSpec, grid


@pytest.fixture
def c2():
    return helpers.chain(2)


@pytest.fixture
def c3():
    return helpers.chain(3)


@pytest.fixture
def c4():
    return helpers.chain(4)


@pytest.fixture
def g22():
    return grid(GridSpec(2, 2))


@pytest.fixture
def g23():
    return grid(GridSpec(2, 3))


@pytest.fixture
def g32():
    return grid(GridSpec(3, 2))


@pytest.fixture
def g33():
    return grid(GridSpec(3, 3))


@pytest.fixture
def n5():
    return helpers.n5()


@pytest.fixture
def m3():
    return helpers.m3()


@pytest.fixture
def s7_result():
    return helpers.s7_result()


@pytest.fixture
def s7(s7_result):
    return s7_result.diagram
