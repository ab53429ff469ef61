import math

import numpy as np
import pytest

from app.actions.configurations import AngleScanConfig, CdConfig, StokesConfig
from app.vortex.absorption import TransitionSpec
from app.vortex.observables import scan_pitch_angle, scan_profile
from app.vortex.polarization import PolarizationState, stokes_scan


@pytest.fixture
def a_cd_config():
    return CdConfig(mbar=1, l_f=2, theta_k=0.1, b_max=1.0, n_points=5)


@pytest.fixture
def a_cd_profile(a_cd_config):
    return scan_profile(
        "cd", a_cd_config.mbar, TransitionSpec(l_f=a_cd_config.l_f), a_cd_config.theta_k, np.linspace(0.0, 1.0, 5)
    )


@pytest.fixture
def a_sigma_ratio_profile():
    # Lambda = +1 is fully absorbed at the vortex center, so the first point is undefined
    return scan_profile("sigma_ratio", 1, TransitionSpec(l_f=2), 0.1, np.linspace(0.0, 1.0, 5), lambda_hel=1)


@pytest.fixture
def a_stokes_config():
    return StokesConfig(mbar=1, theta_k=0.1, b_max=0.5, n_points=3, z_list=[0.0, 0.1])


@pytest.fixture
def a_stokes_scan():
    c = 1.0 / math.sqrt(2.0)
    state = PolarizationState(mbar=1, theta_k=0.1, c_plus=c, c_minus=c)
    return stokes_scan(state, np.linspace(0.0, 0.5, 3), [0.0, 0.1])


@pytest.fixture
def an_angle_scan_config():
    return AngleScanConfig(mbar=1, l_f=2, b=0.25, theta_min=0.01, theta_max=0.25, n_points=4)


@pytest.fixture
def an_angle_profile():
    return scan_pitch_angle("cd", 1, TransitionSpec(l_f=2), 0.25, np.linspace(0.01, 0.25, 4))
