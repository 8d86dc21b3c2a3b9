import numpy as np
import pytest

from qctl import EnsembleSpec, GaussianPacket, make_regime

# Reference parameter set used throughout: m = 1, hbar = 1, opposite unit-width
# packets kicked toward each other, the right one away from the wall.
PACKET_A = GaussianPacket(sigma0=1.0, x0=-5.0, p0=-2.0, mass=1.0)
PACKET_B = GaussianPacket(sigma0=1.0, x0=-15.0, p0=2.0, mass=1.0)


@pytest.fixture(scope="session")
def packet_a():
    return PACKET_A


@pytest.fixture(scope="session")
def packet_b():
    return PACKET_B


@pytest.fixture(scope="session")
def pure_spec():
    return EnsembleSpec("pure", PACKET_A, PACKET_B)


@pytest.fixture(scope="session")
def mixed_spec():
    return EnsembleSpec("mixed", PACKET_A, PACKET_B)


@pytest.fixture(scope="session")
def quantum():
    return make_regime(1.0)


@pytest.fixture(scope="session")
def nearly_classical():
    return make_regime(0.01)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


def wide_grid(n=8193, x_min=-130.0):
    return np.linspace(x_min, 0.0, n)
