from __future__ import annotations

import pytest

from buildingwave.rootsys import root_system
from buildingwave.spherical import validate_thickness


@pytest.fixture(scope="session")
def a1():
    return root_system("A1")


@pytest.fixture(scope="session")
def a2():
    return root_system("A2")


@pytest.fixture(scope="session")
def b2():
    return root_system("B2")


@pytest.fixture(scope="session")
def c2():
    return root_system("C2")


@pytest.fixture(scope="session")
def g2():
    return root_system("G2")


@pytest.fixture(scope="session")
def pa1(a1):
    return validate_thickness(a1, [2])


@pytest.fixture(scope="session")
def pa1_q3(a1):
    return validate_thickness(a1, [3])


@pytest.fixture(scope="session")
def pa2(a2):
    return validate_thickness(a2, [2, 2])


@pytest.fixture(scope="session")
def pb2(b2):
    return validate_thickness(b2, [2, 3])


@pytest.fixture(scope="session")
def pc2(c2):
    return validate_thickness(c2, [2, 2])


@pytest.fixture(scope="session")
def pc2_23(c2):
    return validate_thickness(c2, [2, 3])


@pytest.fixture(scope="session")
def pg2(g2):
    return validate_thickness(g2, [2, 2])
