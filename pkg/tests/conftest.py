import numpy as np
import pytest

from mm import DEFAULT_SIGNATURE, mm_simulate


@pytest.fixture
def rng():
    """Seeded generator so that every test sees the same draws"""
    return np.random.default_rng(20240611)


@pytest.fixture(scope='session')
def mm_series():
    """Moving maxima series with signature (2/6, 1/6, 3/6): theta_X = 1/2, theta_Z = 3/5 for k = 3"""
    return mm_simulate(DEFAULT_SIGNATURE, 10000, seed=11)


@pytest.fixture
def cli():
    from app import create_cli
    return create_cli('testing')


@pytest.fixture(scope='session')
def mm_long():
    """Long run of the same moving maxima process for checks at high quantiles"""
    return mm_simulate(DEFAULT_SIGNATURE, 200000, seed=5)
