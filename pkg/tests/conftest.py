import numpy as np
import pytest

from darkstate.models.params import LadderParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def flat_periodic():
    """Four flat bands at -1.4, -0.6, 0.6, 1.4."""
    return LadderParams(t=1.0, gamma=-0.3, omega_x=0.4, omega_y=0.3, L=16, boundary="periodic")


@pytest.fixture
def flat_open():
    return LadderParams(t=1.0, gamma=-0.3, omega_x=0.4, omega_y=0.3, L=12)


@pytest.fixture
def cdw_params():
    return LadderParams(t=0.5, gamma=-0.3, omega_x=-2.0, omega_y=0.3, L=8, boundary="periodic")


def edge_ladder(gamma: float, L: int = 40) -> LadderParams:
    return LadderParams(t=1.0, gamma=gamma, omega_x=0.0, omega_y=0.3, L=L)
