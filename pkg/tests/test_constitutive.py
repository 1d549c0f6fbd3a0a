"""Constitutive families: closed-form derivatives against independent
finite-difference and bisection oracles, growth classifiers, validators."""
import math

import numpy as np
import pytest

from cavitas.constitutive import (
    ConstitutiveError,
    CustomStress,
    LinearLogEnergy,
    PowerLawEnergy,
    PurePowerStress,
    ShiftedInversePowerStress,
    cavity_pressure_root,
    growth,
    h_derivs,
    linear_growth_stress,
    p_coefficient,
    phi_partials,
    validate,
)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def fd_derivs(f, x, h=1e-4):
    """Central-difference first/second/third derivatives of a scalar f."""
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h) - 2 * f(x) + f(x - h)) / h**2
    d3 = (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h**3)
    return d1, d2, d3


def full_phi(fam, v1, v2, v3):
    return 0.5 * (v1**2 + v2**2 + v3**2) + fam.h(v1 * v2 * v3)


def fd_phi_partials(fam, a, b, h=1e-5):
    """Finite-difference partials of the three-variable energy at (a, b, b)."""
    f = lambda v1, v2, v3: full_phi(fam, v1, v2, v3)
    Phi1 = (f(a + h, b, b) - f(a - h, b, b)) / (2 * h)
    Phi2 = (f(a, b + h, b) - f(a, b - h, b)) / (2 * h)
    Phi11 = (f(a + h, b, b) - 2 * f(a, b, b) + f(a - h, b, b)) / h**2
    Phi12 = (f(a + h, b + h, b) - f(a + h, b - h, b)
             - f(a - h, b + h, b) + f(a - h, b - h, b)) / (4 * h**2)
    Phi111 = (f(a + 2 * h, b, b) - 2 * f(a + h, b, b)
              + 2 * f(a - h, b, b) - f(a - 2 * h, b, b)) / (2 * h**3)
    return Phi1, Phi2, Phi11, Phi12, Phi111


def bisect_root(f, lo, hi, iters=200):
    flo = f(lo)
    assert flo * f(hi) < 0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if flo * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
            flo = f(lo)
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# h and its derivatives
# ---------------------------------------------------------------------------

def test_h_derivs_power_law_at_one(pl125):
    assert h_derivs(pl125, 1.0) == pytest.approx(
        (2.0, 0.25, 2.3125, -6.234375), rel=1e-15)


def test_h_derivs_linear_log_at_one(linlog):
    assert h_derivs(linlog, 1.0) == pytest.approx((2.0, 0.0, 1.0, -2.0), abs=1e-15)


@pytest.mark.parametrize("fam", [PowerLawEnergy(1, 1, 1.25, 1),
                                 PowerLawEnergy(0.7, 2.0, 1.8, 2.5),
                                 LinearLogEnergy(1, 1, 1),
                                 LinearLogEnergy(2.0, 0.5, 3.0)])
def test_h_derivs_match_finite_differences(fam):
    hv, hp, hpp, hppp = h_derivs(fam, 2.0)
    d1, d2, d3 = fd_derivs(fam.h, 2.0)
    assert hp == pytest.approx(d1, rel=1e-6)
    assert hpp == pytest.approx(d2, rel=1e-6)
    assert hppp == pytest.approx(d3, rel=1e-4)


def test_h_derivs_domain_error(pl125):
    with pytest.raises(ConstitutiveError):
        h_derivs(pl125, 0.0)
    with pytest.raises(ConstitutiveError):
        h_derivs(pl125, -1.0)


# ---------------------------------------------------------------------------
# radial partials
# ---------------------------------------------------------------------------

def test_phi_partials_power_law_at_one(pl125):
    pp = phi_partials(pl125, 1.0, 1.0)
    assert pp.Phi == pytest.approx(3.5)
    assert pp.Phi1 == pytest.approx(1.25)
    assert pp.Phi11 == pytest.approx(3.3125)
    assert pp.Phi12 == pytest.approx(2.5625)
    assert pp.Phi111 == pytest.approx(-6.234375)


@pytest.mark.parametrize("fam", [PowerLawEnergy(1, 1, 1.25, 1),
                                 LinearLogEnergy(1, 1, 1)])
def test_phi_partials_diagonal_symmetry(fam, rng):
    lam = rng.uniform(0.2, 5.0, size=50)
    pp = phi_partials(fam, lam, lam)
    np.testing.assert_allclose(pp.Phi1, pp.Phi2, rtol=1e-14)


def test_phi_partials_match_finite_differences(pl125):
    pp = phi_partials(pl125, 1.5, 1.2)
    fd1, fd2, fd11, fd12, fd111 = fd_phi_partials(pl125, 1.5, 1.2)
    assert pp.Phi1 == pytest.approx(fd1, rel=1e-6)
    assert pp.Phi2 == pytest.approx(fd2, rel=1e-6)
    assert pp.Phi11 == pytest.approx(fd11, rel=1e-6)
    assert pp.Phi12 == pytest.approx(fd12, rel=1e-6)
    assert pp.Phi111 == pytest.approx(fd111, rel=1e-3)


@pytest.mark.parametrize("fam", [PowerLawEnergy(1, 1, 1.25, 1),
                                 PowerLawEnergy(1, 1, 1.5, 1),
                                 LinearLogEnergy(1, 1, 1)])
def test_phi_partials_fd_property_grid(fam, rng):
    from conftest import fd4_phi_partials
    pts = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=(50, 2)))
    a, b = pts[:, 0], pts[:, 1]
    pp = phi_partials(fam, a, b)
    fd1, fd2, fd11, fd12 = fd4_phi_partials(fam, a, b)
    np.testing.assert_allclose(pp.Phi1, fd1, rtol=1e-6)
    np.testing.assert_allclose(pp.Phi2, fd2, rtol=1e-6)
    np.testing.assert_allclose(pp.Phi11, fd11, rtol=1e-6)
    np.testing.assert_allclose(pp.Phi12, fd12, rtol=1e-6)


# ---------------------------------------------------------------------------
# the P coefficient
# ---------------------------------------------------------------------------

def test_p_coefficient_at_one(pl125):
    assert p_coefficient(pl125, 1.0, 1.0) == pytest.approx(3.3125)


def test_p_coefficient_linear_log_hand_value():
    assert p_coefficient(LinearLogEnergy(1, 1, 1), 2.0, 1.0) == pytest.approx(1.5)


@pytest.mark.parametrize("fam", [PowerLawEnergy(1, 1, 1.25, 1),
                                 PowerLawEnergy(1, 1, 1.5, 1),
                                 LinearLogEnergy(1, 1, 1)])
def test_p_equals_partials_combination(fam, rng):
    pts = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=(500, 2)))
    a, b = pts[:, 0], pts[:, 1]
    mask = np.abs(a - b) > 1e-6
    a, b = a[mask], b[mask]
    # extended precision on the chord, which cancels near the diagonal
    al, bl = a.astype(np.longdouble), b.astype(np.longdouble)
    pp = phi_partials(fam, al, bl)
    combo = (pp.Phi12 + (pp.Phi1 - pp.Phi2) / (al - bl)).astype(float)
    np.testing.assert_allclose(p_coefficient(fam, a, b), combo, rtol=1e-12)


@pytest.mark.parametrize("fam", [PowerLawEnergy(1, 1, 1.25, 1),
                                 PowerLawEnergy(1, 1, 1.5, 1),
                                 LinearLogEnergy(1, 1, 1)])
def test_p_above_one_and_phi111_negative(fam, rng):
    pts = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=(1000, 2)))
    a, b = pts[:, 0], pts[:, 1]
    assert np.all(p_coefficient(fam, a, b) > 1.0)
    assert np.all(phi_partials(fam, a, b).Phi111 < 0.0)


# ---------------------------------------------------------------------------
# stress-free cavity volume
# ---------------------------------------------------------------------------

def test_cavity_root_linear_log_exact():
    assert cavity_pressure_root(LinearLogEnergy(1, 1, 1)) == pytest.approx(1.0, abs=1e-12)
    assert cavity_pressure_root(LinearLogEnergy(2.0, 0.5, 3.0)) == pytest.approx(
        0.25, abs=1e-12)


def test_cavity_root_power_law_vs_bisection(pl125):
    hroot = cavity_pressure_root(pl125)
    oracle = bisect_root(pl125.hp, 1e-3, 1e3)
    assert hroot == pytest.approx(oracle, abs=1e-12)
    assert hroot == pytest.approx(0.8 ** (1 / 2.25), rel=1e-12)


def test_cavity_root_scaled_power_law():
    fam = PowerLawEnergy(2.0, 1.0, 1.25, 1.0)
    hroot = cavity_pressure_root(fam)
    # h'(v) = 2.5 v^0.25 - v^-2 = 0  <=>  2.5 v^2.25 = 1
    assert 2.5 * hroot**2.25 == pytest.approx(1.0, abs=1e-11)
    assert hroot == pytest.approx(bisect_root(fam.hp, 1e-3, 1e3), abs=1e-12)


# ---------------------------------------------------------------------------
# growth classification
# ---------------------------------------------------------------------------

def test_growth_power_law_sides():
    sub = growth(PowerLawEnergy(1, 1, 1.25, 1))
    assert sub.slic_indicator_3d == 0.0
    assert math.isinf(sub.l_3d)
    sup = growth(PowerLawEnergy(1, 1, 1.5, 1))
    assert math.isinf(sup.slic_indicator_3d)


def test_growth_power_law_boundary_case():
    crit = growth(PowerLawEnergy(1.0, 1.0, 4.0 / 3.0, 1.0))
    assert crit.slic_indicator_3d == pytest.approx(4.0 / 3.0)


def test_growth_dichotomy_matches_exponent_sign():
    for gam in np.linspace(1.05, 1.95, 19):
        ind = growth(PowerLawEnergy(1, 1, gam, 1)).slic_indicator_3d
        assert (ind == 0.0) == (gam < 4.0 / 3.0)


def test_growth_linear_log():
    gr = growth(LinearLogEnergy(1.0, 1.0, 1.0))
    assert gr.l_3d == 1.0
    assert gr.slic_indicator_3d == 0.0
    assert growth(LinearLogEnergy(2.5, 1.0, 1.0)).l_3d == 2.5


def test_growth_one_dimensional():
    gr = growth(ShiftedInversePowerStress(2.0, 1.0))
    assert gr.l_1d == 0.0 and gr.tau_infinity == 2.0
    gr = growth(PurePowerStress(1.0, 0.5))
    assert gr.l_1d == 0.0 and math.isinf(gr.tau_infinity)
    gr = growth(linear_growth_stress(1.0))
    assert gr.l_1d == 1.0 and math.isinf(gr.tau_infinity)


# ---------------------------------------------------------------------------
# validators and parameter ranges
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("fam", [PowerLawEnergy(1, 1, 1.25, 1),
                                 PowerLawEnergy(1, 1, 1.5, 1),
                                 LinearLogEnergy(1, 1, 1),
                                 ShiftedInversePowerStress(2.0, 1.0),
                                 PurePowerStress(1.0, 0.5),
                                 linear_growth_stress(1.0)])
def test_validate_shipped_families(fam):
    rep = validate(fam)
    assert rep.ok, rep.failures


def test_validate_flags_weak_compression_energy():
    rep = validate(ShiftedInversePowerStress(2.0, 0.5))
    assert not rep.ok
    assert any("W(u)" in f["condition"] for f in rep.failures)


def test_parameter_range_rejection():
    with pytest.raises(ConstitutiveError):
        PowerLawEnergy(1.0, 1.0, 2.5, 1.0)       # gamma outside (1, 2)
    with pytest.raises(ConstitutiveError):
        PowerLawEnergy(-1.0, 1.0, 1.25, 1.0)
    with pytest.raises(ConstitutiveError):
        PurePowerStress(1.0, 1.5)                # q outside (0, 1)
    with pytest.raises(ConstitutiveError):
        ShiftedInversePowerStress(2.0, -1.0)


def test_linear_log_positivity_guard():
    # minimum of h sits at v = C/L0; D must keep it positive
    with pytest.raises(ConstitutiveError):
        LinearLogEnergy(1.0, 1.0, -2.0)
    LinearLogEnergy(1.0, 1.0, -0.5)              # h(1) = 0.5 > 0: fine


def test_validate_custom_stress_softening():
    bad = CustomStress(fn=lambda u: u**2, dfn=lambda u: 2 * u,
                       d2fn=lambda u: 2.0 * np.ones_like(u), declared_L=math.inf)
    rep = validate(bad)
    assert not rep.ok
    assert any("tau''" in f["condition"] for f in rep.failures)


def test_stress_energy_closed_forms_match_quadrature(sip):
    from scipy.integrate import quad
    for fam in (sip, ShiftedInversePowerStress(1.5, 2.0), PurePowerStress(1.0, 0.5)):
        for u in (0.5, 2.0, 3.7):
            oracle = quad(fam.tau, 1.0, u, limit=200)[0]
            assert fam.W(u) == pytest.approx(oracle, rel=1e-10, abs=1e-12)


def test_custom_stress_energy_quadrature():
    fam = linear_growth_stress(1.0)
    # W(u) = u^2/2 - ln u - 1/2
    assert fam.W(2.0) == pytest.approx(2.0 - math.log(2.0) - 0.5, rel=1e-9)
