import math

import numpy as np
import pytest

from app.vortex.absorption import TransitionSpec
from app.vortex.beam import BeamSpec, helicity_pair
from app.vortex.polarization import PolarizationState


@pytest.fixture
def e1():
    return TransitionSpec(l_f=1)


@pytest.fixture
def e2():
    return TransitionSpec(l_f=2)


@pytest.fixture
def e3():
    return TransitionSpec(l_f=3)


@pytest.fixture
def b_grid():
    # the default 400-point scan over [0, 2] wavelengths
    return np.linspace(0.0, 2.0, 400)


@pytest.fixture
def a_positive_helicity_beam():
    return BeamSpec(mbar=1, lambda_hel=1, theta_k=0.1)


@pytest.fixture
def a_helicity_pair():
    return helicity_pair(1, 0.1)


@pytest.fixture
def an_equal_superposition():
    c = 1.0 / math.sqrt(2.0)
    return PolarizationState(mbar=1, theta_k=0.1, c_plus=c, c_minus=c, l_f_medium=2)


@pytest.fixture
def a_dipole_medium_superposition():
    c = 1.0 / math.sqrt(2.0)
    return PolarizationState(mbar=1, theta_k=0.1, c_plus=c, c_minus=c, l_f_medium=1)
