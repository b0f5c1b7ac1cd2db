import numpy as np
import pytest

from twomode_jcx.fock import build_basis
from twomode_jcx.models import ModelParams


@pytest.fixture(scope="session")
def basis12():
    return build_basis(12)


@pytest.fixture(scope="session")
def basis20():
    return build_basis(20)


@pytest.fixture(scope="session")
def basis60():
    return build_basis(60)


@pytest.fixture(scope="session")
def basis100():
    return build_basis(100)


@pytest.fixture
def params_f2_g1():
    """Reference non-degenerate couplings in natural units."""
    return ModelParams(g=1.0, f=2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
