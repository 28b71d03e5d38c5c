import math

import pytest

from squintloc import ArrayConfig, PolarPoint, SensingRange, make_sweep_plan


def deg(x):
    return math.radians(x)


@pytest.fixture(scope="session")
def ref_config():
    """N=128 half-wavelength ULA at 30 GHz with 3 GHz bandwidth, 2048+1 tones."""
    return ArrayConfig(num_antennas=128, spacing=0.005, lowest_freq=30e9,
                       bandwidth=3e9, num_subcarriers=2048)


@pytest.fixture(scope="session")
def ref_sensing():
    return SensingRange(theta_max=deg(60), theta_min=deg(-60),
                        r_min=3.0, r_max=82.0, r_mid=40.0)


TRAJECTORIES = {
    "T1": ((5.0, 85.0), (80.0, 85.0)),
    "T2": ((30.0, -60.0), (50.0, -60.0)),
    "T3": ((3.0, 60.0), (82.0, -60.0)),
    "T4": ((60.0, 30.0), (60.0, -30.0)),
}


@pytest.fixture(scope="session")
def plans(ref_config):
    """The four reference sweep trajectories."""
    out = {}
    for name, ((r0, th0), (rc, thc)) in TRAJECTORIES.items():
        out[name] = make_sweep_plan(PolarPoint(r0, deg(th0)),
                                    PolarPoint(rc, deg(thc)), ref_config)
    return out
