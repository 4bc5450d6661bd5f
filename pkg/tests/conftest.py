"""
Shared parameter sets and orbits.

Set A: n=5, k=1, sigma=0, q=3 (spiral). Set B: n=12, k=1, sigma=0, q=5 (node).
"""
import os
import sys

import pytest

# Add parent directory to path to import hessian_lv modules
parent_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, parent_dir)

from hessian_lv.analysis.exponents import validate_params
from hessian_lv.dynamics.integrator import integrate_orbit


@pytest.fixture(scope="session")
def params_a():
    return validate_params(5, 1, 0, 3)


@pytest.fixture(scope="session")
def params_b():
    return validate_params(12, 1, 0, 5)


@pytest.fixture(scope="session")
def params_center():
    return validate_params(5, 1, 0, 7 / 3)


@pytest.fixture(scope="session")
def orbit_a(params_a):
    return integrate_orbit(params_a)


@pytest.fixture(scope="session")
def orbit_b(params_b):
    return integrate_orbit(params_b)


@pytest.fixture(scope="session")
def orbit_center(params_center):
    return integrate_orbit(params_center)
