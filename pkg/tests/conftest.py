import numpy as np
import pytest

from pcs_shaper import OfdmConfig, SystemParams


@pytest.fixture(scope="session")
def link_params() -> SystemParams:
    """The LED link constants used throughout the studies."""
    return SystemParams(
        i_min=100.0,
        i_max=1000.0,
        i_dc=500.0,
        eta=0.44,
        gamma=0.54,
        h_gain=3e-6,
        bandwidth=2e7,
        n0=1e-16,
    )


@pytest.fixture(scope="session")
def ofdm128() -> OfdmConfig:
    return OfdmConfig(n_subcarriers=128, cp_length=32)


@pytest.fixture(scope="session")
def clean_link() -> SystemParams:
    """A wide-dynamic-range link where clipping is negligible."""
    return SystemParams(
        i_min=-1e9,
        i_max=1e9,
        i_dc=0.0,
        eta=1.0,
        gamma=1.0,
        h_gain=1.0,
        bandwidth=1.0,
        n0=1e-4,
    )


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
