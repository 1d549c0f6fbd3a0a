"""Self-similar cavitating solutions of radial elastodynamics.

A cavity opening at the origin from a homogeneously stretched state is
sought in the form w(R, t) = t * phi(R/t).  In the similarity variable
s = R/t the displacement satisfies a second-order ODE that degenerates
at the sonic surface s^2 = Phi11 and at s = 0.  The solver integrates
the de-singularised first-order system in (phi, v), where

    v = phi'(s) * (phi(s)/s)^2

is the specific volume, fits the single precursor shock through the
Rankine-Hugoniot condition, and shoots over the cavity opening speed
phi(0) to match a prescribed far-field stretch.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .constitutive import (
    ConstitutiveError,
    EnergyFamily3D,
    cavity_pressure_root,
    p_coefficient,
    phi_partials,
)

__all__ = [
    "CavityError",
    "IntegrationError",
    "SonicError",
    "NoCavitatingSolution",
    "SonicBeforeMatch",
    "BracketError",
    "IntegrationControls",
    "ShootControls",
    "StopReason",
    "CavityTrajectory",
    "ShockJunction",
    "CavitySolution",
    "LambdaCritBracket",
    "desingularized_rhs",
    "ab_system_rhs",
    "integrate_from_cavity",
    "rh_residual",
    "shoot_cavity_solution",
    "critical_stretch",
    "precursor_shock_necessity_check",
]


class CavityError(RuntimeError):
    pass


class IntegrationError(CavityError):
    pass


class SonicError(CavityError):
    """The similarity ODE was evaluated on the sonic surface."""

    def __init__(self, s: float):
        super().__init__(f"sonic surface reached at s = {s}")
        self.s = s


class NoCavitatingSolution(CavityError):
    """Shooting found no admissible precursor shock (lambda <= lambda_cr)."""

    def __init__(self, lam: float, bracket, n_defined: int, n_sonic: int):
        super().__init__(
            f"no sign change of the shock mismatch over phi0 in "
            f"[{bracket[0]:g}, {bracket[1]:g}] at lambda = {lam} "
            f"({n_defined} probes defined, {n_sonic} hit sonic first)")
        self.lam = lam
        self.bracket = bracket
        self.n_defined = n_defined
        self.n_sonic = n_sonic


class SonicBeforeMatch(NoCavitatingSolution):
    """Every probe trajectory hit the sonic surface before b reached lambda."""


class BracketError(CavityError):
    pass


# ---------------------------------------------------------------------------
# right-hand sides
# ---------------------------------------------------------------------------

def desingularized_rhs(fam: EnergyFamily3D, s: float, phi: float, v: float):
    """Right side of the (phi, v) system, finite at s = 0.

    dphi/ds = v s^2 / phi^2
    dv/ds   = 2 [v s^3 (2 - s^2) + v^2 s^6 (s^2 - 1)/phi^3 - phi^3]
              / (s^6 - s^4 - h''(v) phi^4)

    The denominator equals s^4 (s^2 - Phi11) and stays negative strictly
    inside the sonic surface; at s = 0 the limits are (0, 2/(phi h''(v))).
    """
    if phi <= 0 or v <= 0:
        raise ConstitutiveError(f"state must be positive, got phi={phi}, v={v}")
    if s < 0:
        raise ConstitutiveError(f"similarity variable must be >= 0, got {s}")
    den = s**6 - s**4 - fam.hpp(v) * phi**4
    if den == 0.0:
        raise SonicError(s)
    dphi = v * s * s / (phi * phi)
    dv = 2.0 * (v * s**3 * (2.0 - s * s)
                + v * v * s**6 * (s * s - 1.0) / phi**3
                - phi**3) / den
    return dphi, dv


def ab_system_rhs(fam: EnergyFamily3D, s: float, a: float, b: float):
    """Right side of the first-order similarity system in the stretches.

    (s^2 - Phi11(a,b,b)) a' = (2/s) (a - b) P(a,b,b),   b' = (a - b)/s.

    Singular at s = 0; used as the independent cross-check of the
    de-singularised form and for the diagonal rest-state property.
    """
    pp = phi_partials(fam, a, b)
    q = s * s - pp.Phi11
    if q == 0.0:
        raise SonicError(s)
    da = 2.0 * (a - b) * p_coefficient(fam, a, b) / (s * q)
    db = (a - b) / s
    return da, db


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------

class StopReason(enum.Enum):
    SONIC_APPROACH = "SonicApproach"
    SHOCK_CANDIDATE_PASSED = "ShockCandidatePassed"
    MAX_S = "MaxS"


@dataclass(frozen=True)
class IntegrationControls:
    rtol: float = 1e-10
    atol: float = 1e-12
    eps_sonic: float = 1e-8
    s_max: float | None = None     # None: scaled from phi0/lambda
    max_step: float | None = None
    grid_points: int = 2000


@dataclass
class CavityTrajectory:
    """Dense-output similarity trajectory on (0, s_end].

    a = v s^2 / phi^2 is the radial stretch, b = phi/s the transverse
    one; Q = s^2 - Phi11(a, b, b) is the sonic indicator (negative on
    the computed range).
    """

    s: np.ndarray
    phi: np.ndarray
    v: np.ndarray
    a: np.ndarray
    b: np.ndarray
    Q: np.ndarray
    stop_reason: StopReason
    phi0: float
    v0: float
    family: EnergyFamily3D
    dense: Callable = field(repr=False, default=None)

    def eval(self, s):
        """(phi, v, a, b) interpolated at s in (0, s_end]."""
        s = np.asarray(s, dtype=float)
        phi, v = self.dense(s)
        a = v * s * s / (phi * phi)
        b = phi / s
        return phi, v, a, b

    @property
    def s_end(self) -> float:
        return float(self.s[-1])


def _raw_integrate(fam, phi0, v0, controls: IntegrationControls,
                   lam: float | None = None):
    """solve_ivp driver; terminal events on the sonic surface and, when a
    far-field stretch is given, on the shock-candidate locus b = lambda."""
    eps = controls.eps_sonic

    def rhs(s, y):
        phi, v = y
        if phi <= 0.0 or v <= 0.0:
            # trial stage overshot the positive cone: force step rejection
            return (math.inf, math.inf)
        den = s**6 - s**4 - fam.hpp(v) * phi**4
        return (v * s * s / (phi * phi),
                2.0 * (v * s**3 * (2.0 - s * s)
                       + v * v * s**6 * (s * s - 1.0) / phi**3
                       - phi**3) / den)

    def ev_sonic(s, y):
        phi, v = y
        if phi <= 0.0 or v <= 0.0:
            return -1.0
        # s^4 * (Q + eps): same zero as Q = -eps, regular at s = 0
        return s**6 - s**4 - fam.hpp(v) * phi**4 + eps * s**4
    ev_sonic.terminal = True
    ev_sonic.direction = 1

    events = [ev_sonic]
    if lam is not None:
        def ev_match(s, y):
            return y[0] / max(s, 1e-300) - lam
        ev_match.terminal = True
        ev_match.direction = -1
        events.append(ev_match)

    scale = phi0 / lam if lam is not None else phi0
    s_max = controls.s_max or max(10.0, 8.0 * scale)
    max_step = controls.max_step or max(0.02, scale / 10.0)
    first = min(1e-3, 1e-3 * scale)
    sol = solve_ivp(rhs, (0.0, s_max), [phi0, v0], method="RK45",
                    rtol=controls.rtol, atol=controls.atol,
                    dense_output=True, events=events,
                    first_step=first, max_step=max_step)
    if sol.status == -1 or not np.all(np.isfinite(sol.y)):
        # step collapse right at the sonic surface is the expected end of
        # the maximal trajectory (the slope blows up there); everything
        # else is a genuine failure
        s_last, (phi_l, v_l) = sol.t[-1], sol.y[:, -1]
        if np.isfinite(phi_l) and np.isfinite(v_l) and phi_l > 0 and v_l > 0:
            den = s_last**6 - s_last**4 - fam.hpp(v_l) * phi_l**4
            scale = s_last**6 + s_last**4 + fam.hpp(v_l) * phi_l**4
            if abs(den) < 1e-3 * scale:
                return sol, StopReason.SONIC_APPROACH, float(s_last)
        raise IntegrationError(
            f"integration failed at s = {sol.t[-1]:g} "
            f"(phi0={phi0:g}, v0={v0:g}): {sol.message}")
    if sol.status == 1 and len(sol.t_events[0]) > 0:
        reason, s_end = StopReason.SONIC_APPROACH, float(sol.t_events[0][0])
    elif lam is not None and len(sol.t_events[1]) > 0:
        reason, s_end = StopReason.SHOCK_CANDIDATE_PASSED, float(sol.t_events[1][0])
    else:
        reason, s_end = StopReason.MAX_S, float(sol.t[-1])
    return sol, reason, s_end


def _grid(s_end: float, m: int) -> np.ndarray:
    """Geometric grid resolving the cavity layer, linear tail; open at 0.

    Nodes are de-duplicated at 1e-12 relative separation so finite
    differences of the dense output stay above roundoff.
    """
    g = np.geomspace(s_end * 1e-6, s_end, m // 2)
    l = np.linspace(0.0, s_end, m - m // 2 + 1)[1:]
    s = np.unique(np.round(np.concatenate([g, l]) / s_end, 12)) * s_end
    return s[s > 0]


def _make_trajectory(fam, sol_dense, reason, s_end, phi0, v0,
                     controls) -> CavityTrajectory:
    s = _grid(s_end, controls.grid_points)
    phi, v = sol_dense(s)
    a = v * s * s / (phi * phi)
    b = phi / s
    Q = s * s - np.array([phi_partials(fam, ai, bi).Phi11
                          for ai, bi in zip(a, b)])
    traj = CavityTrajectory(s=s, phi=phi, v=v, a=a, b=b, Q=Q,
                            stop_reason=reason, phi0=phi0, v0=v0,
                            family=fam, dense=sol_dense)
    _check_monotone(traj)
    return traj


def _check_monotone(traj: CavityTrajectory) -> None:
    if not (np.all(np.diff(traj.a) > 0) and np.all(np.diff(traj.b) < 0)):
        raise IntegrationError(
            "trajectory lost the monotone structure (a up, b down); "
            f"phi0={traj.phi0:g}, v0={traj.v0:g}, stop={traj.stop_reason}")


def integrate_from_cavity(fam: EnergyFamily3D, phi0: float, v0: float,
                          controls: IntegrationControls | None = None,
                          lam: float | None = None) -> CavityTrajectory:
    """Integrate the de-singularised system outward from the cavity.

    Terminates at the sonic guard Q >= -eps_sonic, at b = lam when a
    far-field stretch is supplied, or at s_max.
    """
    if phi0 <= 0 or v0 <= 0:
        raise ConstitutiveError("phi0 and v0 must be positive")
    controls = controls or IntegrationControls()
    sol, reason, s_end = _raw_integrate(fam, phi0, v0, controls, lam=lam)
    return _make_trajectory(fam, sol.sol, reason, s_end, phi0, v0, controls)


# ---------------------------------------------------------------------------
# shock fitting
# ---------------------------------------------------------------------------

def rh_residual(fam: EnergyFamily3D, sigma: float, a_minus: float,
                lam: float) -> float:
    """sigma^2 (lam - a_minus) - [Phi1(lam,lam,lam) - Phi1(a_minus,lam,lam)].

    Vanishes exactly on jump-condition-consistent shock triples; the
    transverse stretch is continuous across the shock, only the radial
    stretch jumps.
    """
    if sigma <= 0 or a_minus <= 0 or lam <= 0:
        raise ConstitutiveError("rh_residual requires positive arguments")
    f_out = phi_partials(fam, lam, lam).Phi1
    f_in = phi_partials(fam, a_minus, lam).Phi1
    return sigma * sigma * (lam - a_minus) - (f_out - f_in)


@dataclass(frozen=True)
class ShockJunction:
    sigma: float
    a_minus: float
    lam: float
    rh_residual: float
    lax_ok: bool

    @property
    def jump(self) -> float:
        return self.lam - self.a_minus


def _lax_ok(fam, sigma, a_minus, lam) -> bool:
    s2 = sigma * sigma
    lo = phi_partials(fam, lam, lam).Phi11
    hi = phi_partials(fam, a_minus, lam).Phi11
    return bool(a_minus < lam and lo <= s2 <= hi)


@dataclass
class CavitySolution:
    """A cavitating solution: inner trajectory on (0, sigma] plus the
    admissible precursor shock to the homogeneous far field."""

    trajectory: CavityTrajectory
    junction: ShockJunction
    phi0: float
    v0: float
    family: EnergyFamily3D
    lam: float
    root_count: int = 1

    @property
    def sigma(self) -> float:
        return self.junction.sigma

    def w(self, R, t):
        """Displacement w(R, t) = t phi(R/t) inside the fan, lam R outside."""
        R = np.asarray(R, dtype=float)
        s = R / t
        out = self.lam * R
        inside = (s > 0) & (s < self.sigma)
        if np.any(inside):
            phi, _, _, _ = self.trajectory.eval(s[inside])
            out = np.array(out, dtype=float)
            out[inside] = t * phi
        return out


# ---------------------------------------------------------------------------
# shooting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShootControls:
    phi0_bracket: tuple = (1e-3, 1e2)
    scan_points: int = 48
    expansions: int = 3          # geometric bracket growth when no sign change
    xtol: float = 1e-11
    integration: IntegrationControls = field(default_factory=IntegrationControls)


def _shock_mismatch(fam, phi0, v0, lam, controls):
    """g(phi0): the jump-condition residual at the locus b(s) = lam,
    or None when the trajectory goes sonic before reaching it."""
    sol, reason, s_end = _raw_integrate(fam, phi0, v0, controls.integration,
                                        lam=lam)
    if reason is not StopReason.SHOCK_CANDIDATE_PASSED:
        return None
    sigma = s_end
    phi_s, v_s = sol.sol(sigma)
    a_minus = v_s * sigma * sigma / (phi_s * phi_s)
    return rh_residual(fam, sigma, a_minus, lam), sigma, a_minus, sol


def shoot_cavity_solution(fam: EnergyFamily3D, lam: float,
                          cavity_condition: float | str = "stress_free",
                          controls: ShootControls | None = None
                          ) -> CavitySolution:
    """Shoot over the cavity speed phi0 to satisfy the shock condition.

    cavity_condition: "stress_free" fixes v0 to the root of h'; a float
    prescribes v0 directly.  Returns the solution at the smallest root of
    the mismatch (root_count reports how many sign changes the scan saw).
    """
    if lam <= 0:
        raise ConstitutiveError("lambda must be positive")
    controls = controls or ShootControls()
    if cavity_condition == "stress_free":
        v0 = cavity_pressure_root(fam)
    else:
        v0 = float(cavity_condition)
        if v0 <= 0:
            raise ConstitutiveError("prescribed v0 must be positive")

    lo, hi = controls.phi0_bracket
    brackets = []
    n_defined = n_sonic = 0
    for _ in range(controls.expansions + 1):
        grid = np.geomspace(lo, hi, controls.scan_points)
        prev = None
        n_defined = n_sonic = 0
        brackets = []
        for p0 in grid:
            res = _shock_mismatch(fam, p0, v0, lam, controls)
            if res is None:
                n_sonic += 1
                prev = None
                continue
            n_defined += 1
            if prev is not None and np.sign(res[0]) != np.sign(prev[1]):
                brackets.append((prev[0], p0))
            prev = (p0, res[0])
        if brackets:
            break
        lo, hi = lo / 10.0, hi * 10.0
    if not brackets:
        if n_defined == 0:
            raise SonicBeforeMatch(lam, (lo, hi), n_defined, n_sonic)
        raise NoCavitatingSolution(lam, (lo, hi), n_defined, n_sonic)

    # smallest root; the scan may see several sign changes
    b0, b1 = brackets[0]
    phi0 = brentq(lambda p: _shock_mismatch(fam, p, v0, lam, controls)[0],
                  b0, b1, xtol=controls.xtol)
    resid, sigma, a_minus, sol = _shock_mismatch(fam, phi0, v0, lam, controls)
    junction = ShockJunction(sigma=sigma, a_minus=a_minus, lam=lam,
                             rh_residual=resid,
                             lax_ok=_lax_ok(fam, sigma, a_minus, lam))
    if not junction.lax_ok:
        raise NoCavitatingSolution(lam, (b0, b1), n_defined, n_sonic)
    traj = _make_trajectory(fam, sol.sol, StopReason.SHOCK_CANDIDATE_PASSED,
                            sigma, phi0, v0, controls.integration)
    return CavitySolution(trajectory=traj, junction=junction, phi0=phi0,
                          v0=v0, family=fam, lam=lam,
                          root_count=len(brackets))


# ---------------------------------------------------------------------------
# critical stretch
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaCritBracket:
    lo: float            # shooting fails here
    hi: float            # shooting succeeds here
    probes: tuple        # (lambda, solvable) pairs, in bisection order

    @property
    def width(self) -> float:
        return self.hi - self.lo


def critical_stretch(fam: EnergyFamily3D, bracket=(1.0, 4.0),
                     tol: float = 1e-2,
                     controls: ShootControls | None = None
                     ) -> LambdaCritBracket:
    """Bisect the solvability threshold of the shooting problem.

    Returns a bracket of width <= tol with a cavitating solution at the
    top and none at the bottom.
    """
    controls = controls or ShootControls(
        integration=IntegrationControls(rtol=1e-8, atol=1e-10))

    def solvable(lam: float) -> bool:
        try:
            shoot_cavity_solution(fam, lam, controls=controls)
            return True
        except NoCavitatingSolution:
            return False

    lo, hi = bracket
    probes = []
    if not solvable(hi):
        raise BracketError(f"shooting must succeed at the bracket top {hi}")
    probes.append((hi, True))
    if solvable(lo):
        raise BracketError(f"shooting must fail at the bracket bottom {lo}")
    probes.append((lo, False))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        ok = solvable(mid)
        probes.append((mid, ok))
        if ok:
            hi = mid
        else:
            lo = mid
    return LambdaCritBracket(lo=lo, hi=hi, probes=tuple(probes))


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrecursorReport:
    jump: float
    sigma: float
    nondegenerate: bool


def precursor_shock_necessity_check(sol: CavitySolution,
                                    margin: float = 1e-6) -> PrecursorReport:
    """Assert the precursor shock is a genuine jump (a_minus < lambda
    strictly); a degenerate jump would contradict the shock being
    unavoidable for cavity formation."""
    jump = sol.junction.jump
    ok = jump > margin
    if not ok:
        raise CavityError(
            f"degenerate precursor shock: lambda - a_minus = {jump:g} "
            f"<= margin {margin:g}")
    return PrecursorReport(jump=jump, sigma=sol.sigma, nondegenerate=ok)
