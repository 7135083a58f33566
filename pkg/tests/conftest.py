"""
PyTest configuration file.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the project root directory to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.coding.construction import construct_code_monte_carlo  # noqa: E402
from src.coding.polar import CodeSpec  # noqa: E402


@pytest.fixture
def rng():
    """Seeded generator for test data."""
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def code_16():
    """(16, 8) code constructed at sigma_bar2 = 0.5."""
    spec, _ = construct_code_monte_carlo(n=4, K=8, sigma_bar2=0.5, trials=2000, seed=1)
    return spec


@pytest.fixture(scope="session")
def code_64():
    """(64, 32) code constructed at sigma_bar2 = 0.6."""
    spec, _ = construct_code_monte_carlo(n=6, K=32, sigma_bar2=0.6, trials=2000, seed=2)
    return spec


@pytest.fixture
def identity_code():
    """Factory for codes with the identity transmission permutation."""
    def make(n, info_set):
        return CodeSpec(n=n, K=len(info_set), info_set=info_set, tx_perm=np.arange(1 << n))
    return make
