"""Self-similar fracture (or shear-band) fans in one dimension.

The candidate motion y(x, t) = t Y(x/t) with

    Y(xi) = lam * xi                     |xi| > sigma
    Y(xi) = sign(xi) * Y0 + alpha * xi   |xi| < sigma

opens a crack of width 2 t Y0 at x = 0 between two outgoing shocks.  The
inner stretch alpha is a free parameter: every 0 < alpha < lam yields a
jump-condition-consistent, Lax-admissible fan, which is the 1-d face of
the non-uniqueness problem.  The energy production of the fan splits
into the (negative) shock dissipations and the (positive) crack opening
work 2 (tau_inf - tau(alpha)) Y0.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constitutive import ConstitutiveError, StressFamily1D, growth

__all__ = [
    "FractureFan",
    "SlicClass",
    "EnergyProduction1D",
    "build_fan",
    "eval_Y",
    "eval_y",
    "shock_dissipation",
    "crack_opening_work",
    "energy_production",
    "slic_classify_1d",
]


@dataclass(frozen=True)
class FractureFan:
    lam: float
    alpha: float
    sigma: float
    Y0: float
    family: StressFamily1D
    lax_ok: bool

    def rh_residuals(self) -> tuple:
        """(kinematic, dynamic) jump-condition residuals; both zero by
        construction of sigma and Y0."""
        tau = self.family.tau
        kin = self.Y0 - self.sigma * (self.lam - self.alpha)
        dyn = (self.sigma**2 * (self.lam - self.alpha)
               - (tau(self.lam) - tau(self.alpha)))
        return kin, dyn


def build_fan(fam: StressFamily1D, lam: float, alpha: float) -> FractureFan:
    """Fit sigma and Y0 from the jump conditions at xi = +-sigma.

    sigma^2 = (tau(lam) - tau(alpha)) / (lam - alpha),  Y0 = sigma (lam - alpha).
    With softening stress both shocks are automatically Lax-admissible.
    """
    if not 0 < alpha < lam:
        raise ConstitutiveError(
            f"need 0 < alpha < lambda, got alpha={alpha}, lambda={lam}")
    dt = float(fam.tau(lam) - fam.tau(alpha))
    if dt <= 0:
        raise ConstitutiveError(
            f"tau(lambda) <= tau(alpha): not an increasing stress on "
            f"[{alpha}, {lam}]")
    sigma = math.sqrt(dt / (lam - alpha))
    Y0 = sigma * (lam - alpha)
    s2 = sigma * sigma
    lax = bool(fam.taup(lam) <= s2 + 1e-14 and s2 <= fam.taup(alpha) + 1e-14)
    return FractureFan(lam=lam, alpha=alpha, sigma=sigma, Y0=Y0,
                       family=fam, lax_ok=lax)


def eval_Y(fan: FractureFan, xi):
    """Piecewise-linear fan profile; continuous at +-sigma, jump 2 Y0 at 0."""
    xi = np.asarray(xi, dtype=float)
    inner = np.abs(xi) < fan.sigma
    out = fan.lam * xi
    out = np.where(inner, np.sign(xi) * fan.Y0 + fan.alpha * xi, out)
    return out if out.ndim else float(out)


def eval_y(fan: FractureFan, x, t):
    """y(x, t) = t Y(x/t) for t > 0 and the unbroken state lam x for t <= 0."""
    x = np.asarray(x, dtype=float)
    if t <= 0:
        out = fan.lam * x
        return out if out.ndim else float(out)
    out = t * eval_Y(fan, x / t)
    return out if np.ndim(out) else float(out)


def eval_y_x(fan: FractureFan, x, t):
    """Classical strain y_x away from the crack line (alpha inside the
    fan, lam outside); the crack itself carries the extra 2 t Y0 delta."""
    x = np.asarray(x, dtype=float)
    if t <= 0:
        out = np.full_like(x, fan.lam)
        return out if out.ndim else float(out)
    out = np.where(np.abs(x) < fan.sigma * t, fan.alpha, fan.lam)
    return out if out.ndim else float(out)


def shock_dissipation(fan: FractureFan) -> float:
    """Entropy production of one outgoing shock (both are equal by the
    fan symmetry): -s [[eta]] + [[q]] with eta = v^2/2 + W, q = -v tau.

    Equals sigma Y0^2 / 2 - sigma (W(lam) - W(alpha)) + Y0 tau(alpha);
    nonpositive for Lax-admissible shocks.
    """
    fam = fan.family
    return (0.5 * fan.sigma * fan.Y0**2
            - fan.sigma * (fam.W(fan.lam) - fam.W(fan.alpha))
            + fan.Y0 * fam.tau(fan.alpha))


def crack_opening_work(fan: FractureFan) -> float:
    """Rate of work absorbed by the opening crack, 2 (tau_inf - tau(alpha)) Y0;
    infinite for unbounded stress."""
    tau_inf = growth(fan.family).tau_infinity
    if math.isinf(tau_inf):
        return math.inf
    return 2.0 * (tau_inf - fan.family.tau(fan.alpha)) * fan.Y0


@dataclass(frozen=True)
class EnergyProduction1D:
    T: float
    by_split: float       # 2 mu_shock + crack work
    by_energy: float      # sigma Y0^2 - 2 sigma (W(lam)-W(alpha)) + 2 tau_inf Y0
    by_chord: float       # sigma Y0^2 + 2 Y0 (tau_inf - (W(lam)-W(alpha))/(lam-alpha))
    mu_shock: float
    crack_work: float
    finite: bool


def energy_production(fan: FractureFan) -> EnergyProduction1D:
    """Total energy production rate T of the fan, via its three equivalent
    expressions (they agree identically; all are positive for bounded
    stress, and T = +inf when tau is unbounded)."""
    fam = fan.family
    tau_inf = growth(fam).tau_infinity
    mu = shock_dissipation(fan)
    if math.isinf(tau_inf):
        return EnergyProduction1D(T=math.inf, by_split=math.inf,
                                  by_energy=math.inf, by_chord=math.inf,
                                  mu_shock=mu, crack_work=math.inf,
                                  finite=False)
    pc = crack_opening_work(fan)
    dW = fam.W(fan.lam) - fam.W(fan.alpha)
    e1 = 2.0 * mu + pc
    e2 = fan.sigma * fan.Y0**2 - 2.0 * fan.sigma * dW + 2.0 * tau_inf * fan.Y0
    e3 = (fan.sigma * fan.Y0**2
          + 2.0 * fan.Y0 * (tau_inf - dW / (fan.lam - fan.alpha)))
    return EnergyProduction1D(T=e3, by_split=e1, by_energy=e2, by_chord=e3,
                              mu_shock=mu, crack_work=pc, finite=True)


class SlicClass(enum.Enum):
    SLIC = "Slic"
    NOT_SLIC = "NotSlic"


def slic_classify_1d(fam: StressFamily1D) -> SlicClass:
    """The fan is a mollified-limit solution iff tau grows sublinearly:
    classified symbolically through lim tau(u)/u."""
    return SlicClass.SLIC if growth(fam).l_1d == 0.0 else SlicClass.NOT_SLIC
