import numpy as np
import pytest

from glidedtc import analysis


@pytest.fixture(scope="session")
def root_table():
    """First 14 resonance roots; shared by the acceptance criteria."""
    return analysis.find_roots(14)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
