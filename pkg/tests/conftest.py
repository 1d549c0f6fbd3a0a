"""Shared fixtures and oracles: solved solutions, fracture fans, and a
fourth-order finite-difference oracle for the radial energy partials."""
import numpy as np
import pytest

from cavitas import (
    LinearLogEnergy,
    PowerLawEnergy,
    ShiftedInversePowerStress,
    build_fan,
    shoot_cavity_solution,
)
from cavitas.constitutive import linear_growth_stress


@pytest.fixture(scope="session")
def pl125():
    return PowerLawEnergy(1.0, 1.0, 1.25, 1.0)


@pytest.fixture(scope="session")
def pl15():
    return PowerLawEnergy(1.0, 1.0, 1.5, 1.0)


@pytest.fixture(scope="session")
def linlog():
    return LinearLogEnergy(1.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def sol_pl125(pl125):
    return shoot_cavity_solution(pl125, 3.0)


@pytest.fixture(scope="session")
def sol_pl15(pl15):
    return shoot_cavity_solution(pl15, 3.0)


@pytest.fixture(scope="session")
def sol_linlog(linlog):
    return shoot_cavity_solution(linlog, 3.0)


@pytest.fixture(scope="session")
def sip():
    return ShiftedInversePowerStress(2.0, 1.0)


@pytest.fixture(scope="session")
def fan_sip(sip):
    return build_fan(sip, 2.0, 1.0)


@pytest.fixture(scope="session")
def fan_linear():
    return build_fan(linear_growth_stress(1.0), 2.0, 1.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def _d1(g, x, h):
    """Fourth-order central first derivative."""
    return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h)


def _d2(g, x, h):
    """Fourth-order central second derivative."""
    return (-g(x + 2 * h) + 16 * g(x + h) - 30 * g(x)
            + 16 * g(x - h) - g(x - 2 * h)) / (12 * h * h)


def fd4_phi_partials(fam, a, b, h_rel=1e-3):
    """(Phi1, Phi2, Phi11, Phi12) of the three-variable stored energy at
    (a, b, b) by fourth-order finite differences; vectorised, independent
    of the closed forms under test."""
    f = lambda v1, v2, v3: 0.5 * (v1**2 + v2**2 + v3**2) + fam.h(v1 * v2 * v3)
    ha = h_rel * np.maximum(np.abs(a), 0.05)
    hb = h_rel * np.maximum(np.abs(b), 0.05)
    Phi1 = _d1(lambda t: f(t, b, b), a, ha)
    Phi2 = _d1(lambda t: f(a, t, b), b, hb)
    Phi11 = _d2(lambda t: f(t, b, b), a, ha)
    Phi12 = _d1(lambda s: _d1(lambda t: f(t, s, b), a, ha), b, hb)
    return Phi1, Phi2, Phi11, Phi12
