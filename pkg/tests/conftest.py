import numpy as np
import pytest

from racenet import (DynamicsConfig, RaceParameters, complete, dms,
                     race_payoff_matrix)

# canonical early-regime point used throughout the figures
EARLY = dict(c=1.0, b=4.0, B=1.0e4, W=100.0, s=1.5, p_fo=0.5, p_r=0.5)


@pytest.fixture(scope="session")
def early_params():
    return RaceParameters(**EARLY)


@pytest.fixture(scope="session")
def early_race(early_params):
    return race_payoff_matrix(early_params)


@pytest.fixture(scope="session")
def cfg_acc():
    return DynamicsConfig()


@pytest.fixture(scope="session")
def small_dms():
    return dms(60, 2, 7)


@pytest.fixture(scope="session")
def wm_graph():
    return complete(30)


def assert_matrix(actual, expected, tol=1e-12):
    a = np.asarray(actual.entries if hasattr(actual, "entries") else actual)
    e = np.asarray(expected)
    assert a.shape == e.shape
    assert np.all(np.abs(a - e) <= tol), f"{a} != {e}"
