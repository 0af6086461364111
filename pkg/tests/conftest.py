import math

import pytest

from patchwork.geometry import make_chair, make_grid, make_qp
from patchwork.groups import (homothety_action, piecewise_action, qp_action,
                              rigid_action, translation_action)
from patchwork.theta import theta_affine, theta_identity

SQRT2 = math.sqrt(2.0)
CAP = SQRT2 / 2.0


@pytest.fixture(scope="session")
def grid():
    return make_grid()


@pytest.fixture(scope="session")
def chair5():
    return make_chair(levels=5)


@pytest.fixture(scope="session")
def qp_source():
    return make_qp()


@pytest.fixture(scope="session")
def t_action():
    return translation_action()


@pytest.fixture(scope="session")
def r_action():
    return rigid_action()


@pytest.fixture(scope="session")
def h_action():
    return homothety_action()


@pytest.fixture(scope="session")
def p_action():
    return piecewise_action()


@pytest.fixture(scope="session")
def q_action():
    return qp_action()


@pytest.fixture(scope="session")
def th_id():
    return theta_identity()


@pytest.fixture(scope="session")
def th_aff():
    return theta_affine()
