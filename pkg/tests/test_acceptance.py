"""Acceptance suite: one test per criterion, each printing a pass line
with its runtime against the stated budget.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines live.
"""
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from cavitas.cavity import (
    IntegrationControls,
    ShootControls,
    ab_system_rhs,
    critical_stretch,
    desingularized_rhs,
    shoot_cavity_solution,
)
from cavitas.constitutive import (
    LinearLogEnergy,
    PowerLawEnergy,
    ShiftedInversePowerStress,
    linear_growth_stress,
    p_coefficient,
    phi_partials,
)
from cavitas.energy_audit import (
    energy_bracket,
    energy_delta_closed,
    energy_delta_quadrature,
    shock_production,
)
from cavitas.fracture1d import build_fan, energy_production
from cavitas.mollify import RadialMotion, det_positivity
from cavitas.slic import (
    cavity_probe_field,
    odd_probe_1d,
    residual_ladder_1d,
    residual_ladder_3d,
    slic_energy_ladder,
)

FAMILIES_3D = [PowerLawEnergy(1, 1, 1.25, 1),
               PowerLawEnergy(1, 1, 1.5, 1),
               LinearLogEnergy(1, 1, 1)]


@contextmanager
def criterion(num: int, budget_s: float, detail: str = ""):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - t0
        print(f"criterion {num:2d}: FAIL after {elapsed:.1f}s  {detail}")
        raise
    elapsed = time.perf_counter() - t0
    print(f"criterion {num:2d}: PASS in {elapsed:.1f}s (< {budget_s:.0f}s)  {detail}")
    assert elapsed < budget_s, f"criterion {num} exceeded {budget_s}s"


from conftest import fd4_phi_partials


def test_criterion_1_constitutive_identities():
    rng = np.random.default_rng(7)
    with criterion(1, 5.0, "constitutive identities, 1e4 points x 3 families"):
        for fam in FAMILIES_3D:
            pts = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=(10000, 2)))
            a, b = pts[:, 0], pts[:, 1]
            pp = phi_partials(fam, a, b)
            P = p_coefficient(fam, a, b)
            assert np.all(P > 1.0)
            assert np.all(pp.Phi111 < 0.0)
            # the chord (Phi1 - Phi2)/(a - b) cancels catastrophically near
            # the diagonal; evaluate the oracle side in extended precision
            mask = np.abs(a - b) > 1e-6
            al, bl = a.astype(np.longdouble), b.astype(np.longdouble)
            ppl = phi_partials(fam, al[mask], bl[mask])
            combo = ppl.Phi12 + (ppl.Phi1 - ppl.Phi2) / (al - bl)[mask]
            np.testing.assert_allclose(P[mask], combo.astype(float), rtol=1e-12)
            fd1, fd2, fd11, fd12 = fd4_phi_partials(fam, a, b)
            np.testing.assert_allclose(pp.Phi1, fd1, rtol=1e-6)
            np.testing.assert_allclose(pp.Phi2, fd2, rtol=1e-6)
            np.testing.assert_allclose(pp.Phi11, fd11, rtol=1e-6)
            np.testing.assert_allclose(pp.Phi12, fd12, rtol=1e-6)


def test_criterion_2_desingularization(sol_pl125, sol_pl15, sol_linlog):
    with criterion(2, 10.0, "(phi,v) vs (a,b) system on three trajectories"):
        for sol in (sol_pl125, sol_pl15, sol_linlog):
            fam = sol.family
            tr = sol.trajectory
            ss = np.linspace(0.05, tr.s_end * 0.9999, 300)
            phi, v, a, b = tr.eval(ss)
            for i in range(0, len(ss), 7):
                s = ss[i]
                dphi, dv = desingularized_rhs(fam, s, phi[i], v[i])
                da, db = ab_system_rhs(fam, s, a[i], b[i])
                dv_chain = da * b[i]**2 + 2.0 * a[i] * b[i] * db
                assert dv == pytest.approx(dv_chain, rel=1e-8)
                assert dphi == pytest.approx(a[i], rel=1e-10)
            # finite value at the origin
            dphi0, dv0 = desingularized_rhs(fam, 0.0, sol.phi0, sol.v0)
            assert dphi0 == 0.0
            assert dv0 == pytest.approx(2.0 / (sol.phi0 * fam.hpp(sol.v0)),
                                        rel=1e-12)


def test_criterion_3_existence_and_self_convergence():
    fam = PowerLawEnergy(1, 1, 1.25, 1)
    with criterion(3, 60.0, "cavitating solution at lambda=3, tol/10 stability"):
        sol = shoot_cavity_solution(fam, 3.0)
        tr = sol.trajectory
        assert np.all(np.diff(tr.a) > 0)
        assert np.all(np.diff(tr.b) < 0)
        assert np.all(np.diff(tr.a - tr.b) > 0)
        assert np.all(tr.Q < 0)
        j = sol.junction
        assert j.lax_ok and j.a_minus < sol.lam
        su = np.linspace(1e-3 * tr.s_end, tr.s_end, 2001)
        d2 = np.diff(tr.eval(su)[0], 2)
        assert d2.min() > -1e-10 * np.abs(d2).max()

        fine = ShootControls(integration=IntegrationControls(
            rtol=1e-11, atol=1e-13))
        sol_f = shoot_cavity_solution(fam, 3.0, controls=fine)
        for coarse, refined in ((sol.phi0, sol_f.phi0),
                                (sol.sigma, sol_f.sigma),
                                (j.a_minus, sol_f.junction.a_minus)):
            assert abs(coarse - refined) / abs(refined) < 1e-4


def test_criterion_4_energy_paradox(sol_pl125, sol_pl15, sol_linlog):
    with criterion(4, 30.0, "energy deficit: closed form, quadrature, production"):
        for sol in (sol_pl125, sol_pl15, sol_linlog):
            d1 = energy_delta_closed(sol, 1.0)
            assert d1 < 0
            assert energy_delta_closed(sol, 2.0) == pytest.approx(8 * d1,
                                                                  rel=1e-14)
            dq = energy_delta_quadrature(sol, 1.0, rho=1.2 * sol.sigma)
            assert dq == pytest.approx(d1, rel=1e-4)
            prod = shock_production(sol.family, sol.junction)
            br = energy_bracket(sol.family, sol.junction.a_minus, sol.lam)
            assert prod == pytest.approx(sol.sigma * br, rel=1e-12)
            assert prod <= 0


def test_criterion_5_fracture_fan():
    rng = np.random.default_rng(11)
    fam = ShiftedInversePowerStress(2.0, 1.0)
    with criterion(5, 5.0, "1-d fan reference values and T identity"):
        fan = build_fan(fam, 2.0, 1.0)
        assert fan.sigma == pytest.approx(math.sqrt(0.5), abs=1e-12)
        assert fan.Y0 == pytest.approx(math.sqrt(0.5), abs=1e-12)
        assert fan.lax_ok
        prod = energy_production(fan)
        assert prod.T == pytest.approx(1.3338115340618213, abs=1e-4)
        assert prod.by_split == pytest.approx(prod.by_chord, rel=1e-10)
        assert prod.by_energy == pytest.approx(prod.by_chord, rel=1e-10)
        for _ in range(100):
            lam = rng.uniform(0.5, 6.0)
            alpha = rng.uniform(0.15, 0.98) * lam
            p = energy_production(build_fan(fam, lam, alpha))
            assert p.T > 0
            assert p.by_split == pytest.approx(p.by_chord, rel=1e-10)
            assert p.by_energy == pytest.approx(p.by_chord, rel=1e-10)


def test_criterion_6_slic_dichotomy_3d(sol_pl125, sol_pl15, sol_linlog):
    targets = [(sol_pl125, -0.25), (sol_pl15, +0.5), (sol_linlog, -1.0)]
    with criterion(6, 600.0, "3-d residual ladders {8,16,32,64}"):
        for sol, expected in targets:
            rep = residual_ladder_3d(sol)
            assert rep.fitted_rate == pytest.approx(expected, abs=0.2), \
                f"{sol.family.kind}: rate {rep.fitted_rate} vs {expected}"
            if expected < 0:
                assert rep.verdict == "DecaysToZero" == rep.theory_verdict
            else:
                assert rep.verdict == "NonVanishing" == rep.theory_verdict


def test_criterion_7_slic_dichotomy_1d():
    with criterion(7, 120.0, "1-d fan residual ladders"):
        sip = build_fan(ShiftedInversePowerStress(2.0, 1.0), 2.0, 1.0)
        rep = residual_ladder_1d(sip)
        assert rep.theory_verdict == "DecaysToZero" == rep.verdict
        assert abs(rep.actions[-1]) < 0.25 * abs(rep.actions[0])

        lin = build_fan(linear_growth_stress(1.0), 2.0, 1.0)
        rep = residual_ladder_1d(lin)
        assert rep.theory_verdict == "NonVanishing" == rep.verdict
        assert rep.predicted_limit != 0.0
        assert rep.final_gap < 0.10


def test_criterion_8_surface_energy(sol_linlog):
    with criterion(8, 600.0, "mollified energy vs weak + surface term"):
        rep = slic_energy_ladder(sol_linlog)
        assert rep.rel_gap < 0.05
        assert rep.p_wf > 0
        assert rep.extrapolated > 0     # cavity ends up above homogeneous


def test_criterion_9_det_positivity_and_layer_bounds(sol_pl125, sol_linlog):
    with criterion(9, 300.0, "mollified Jacobian positivity and layer sandwich"):
        for sol in (sol_pl125, sol_linlog):
            motion = RadialMotion.from_solution(sol)
            reports = [det_positivity(motion, n) for n in (8, 16, 32, 64)]
            assert all(r.ok and r.min_det > 0 for r in reports)
            cphi = [r.cphi for r in reports]
            c3 = [r.c3 for r in reports]
            assert max(cphi) / min(cphi) < 2.0
            assert max(c3) / min(c3) < 2.0
            w0 = motion.w0(1.0)
            for r in reports:
                assert r.layer_min >= r.cphi * r.n**3 * w0**3 * (1 - 1e-12)
                assert r.layer_max <= r.c3 * (1 + r.n**3) * (1 + 1e-12)


def test_criterion_10_critical_stretch():
    fam = PowerLawEnergy(1, 1, 1.25, 1)
    with criterion(10, 600.0, "lambda_cr bisection bracket"):
        br = critical_stretch(fam, bracket=(1.0, 3.0), tol=1e-2)
        assert br.width <= 1e-2
        assert len(br.probes) >= 8
        # solvability is monotone across all probes
        lams = sorted(br.probes)
        flags = [ok for _, ok in lams]
        assert flags == sorted(flags)
