import numpy as np
import pytest

from carray import ElementPatternModel, default_geometry


@pytest.fixture(scope="session")
def geometry():
    return default_geometry()


@pytest.fixture(scope="session")
def iso():
    return ElementPatternModel.isotropic()


@pytest.fixture(scope="session")
def model():
    return ElementPatternModel()


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)
