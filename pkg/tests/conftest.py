import pytest

from crackwake import Bimaterial, Loading, PointForce

from helpers import MU_CONTRAST_67


@pytest.fixture
def bm_equal():
    return Bimaterial(1.0, 1.0)


@pytest.fixture
def bm_pos():
    return Bimaterial(1.0, MU_CONTRAST_67)


@pytest.fixture
def bm_neg():
    return Bimaterial(MU_CONTRAST_67, 1.0)


@pytest.fixture
def sym_pair():
    """Symmetric opening pair: p+ = p- = -1 at x1 = -1, so K0 = sqrt(2/pi)."""
    return Loading((PointForce(-1.0, "+", -1.0), PointForce(-1.0, "-", -1.0)))
