"""Shared fixtures; the heavy interior-point solves are session scoped so the
module suites and the acceptance suite reuse them."""

import numpy as np
import pytest

from sepdisc.discrimination import optimal_global, optimal_ppt
from sepdisc.states import catalog


@pytest.fixture
def rng():
    return np.random.default_rng(20140829)


@pytest.fixture(scope="session")
def bell4_ppt():
    return optimal_ppt(catalog("bell4"))


@pytest.fixture(scope="session")
def bell3_ppt():
    return optimal_ppt(catalog("bell3"))


@pytest.fixture(scope="session")
def ydy_ppt():
    return optimal_ppt(catalog("ydy"))


@pytest.fixture(scope="session")
def ydy_global():
    return optimal_global(catalog("ydy"))
