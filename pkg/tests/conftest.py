import numpy as np
import pytest

from platestamp import Geometry, Material


@pytest.fixture(scope="session")
def geom():
    """Desk-scale rectangle used throughout the suite."""
    return Geometry(l=2.0, h=1.0)


@pytest.fixture(scope="session")
def mat():
    return Material(E=1.0, nu=0.3)


@pytest.fixture(scope="session")
def etas11():
    return np.linspace(0.0, 1.0, 11)
