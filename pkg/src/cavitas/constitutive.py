"""Constitutive families for radial elasticity and 1-d bars.

Two isotropic stored-energy families of the form

    Phi(v1, v2, v3) = (v1^2 + v2^2 + v3^2)/2 + h(v1*v2*v3)

with strictly convex h (h'' > 0, h''' < 0) that blows up at zero volume,
and two 1-d stress families tau(u) with tau' > 0, tau'' < 0.  The growth
of h and tau at infinity decides whether the singular solutions built on
top of them admit a vanishing mollified residual, so the classifiers here
are computed symbolically from the family kind, never by numerical
limiting.

All quantities are dimensionless; the reference configuration is the
unit ball (3-d) or the unit interval (1-d).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "ConstitutiveError",
    "EnergyFamily3D",
    "PowerLawEnergy",
    "LinearLogEnergy",
    "StressFamily1D",
    "ShiftedInversePowerStress",
    "PurePowerStress",
    "CustomStress",
    "PhiPartials",
    "GrowthReport",
    "ValidationReport",
    "h_derivs",
    "phi_partials",
    "p_coefficient",
    "cavity_pressure_root",
    "growth",
    "validate",
]


class ConstitutiveError(ValueError):
    """Raised for invalid material parameters or out-of-domain arguments."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConstitutiveError(msg)


# ---------------------------------------------------------------------------
# 3-d stored energies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyFamily3D:
    """Base for stored energies Phi = |v|^2/2 + h(v1 v2 v3)."""

    kind = "abstract"

    def h(self, v):
        raise NotImplementedError

    def hp(self, v):
        raise NotImplementedError

    def hpp(self, v):
        raise NotImplementedError

    def hppp(self, v):
        raise NotImplementedError


@dataclass(frozen=True)
class PowerLawEnergy(EnergyFamily3D):
    """h(v) = A v^gamma + B v^(-beta), A,B > 0, gamma in (1,2), beta > 0."""

    A: float = 1.0
    B: float = 1.0
    gamma: float = 1.25
    beta: float = 1.0
    kind = "power_law"

    def __post_init__(self):
        _require(self.A > 0, f"A must be positive, got {self.A}")
        _require(self.B > 0, f"B must be positive, got {self.B}")
        _require(1.0 < self.gamma < 2.0, f"gamma must lie in (1,2), got {self.gamma}")
        _require(self.beta > 0, f"beta must be positive, got {self.beta}")

    def h(self, v):
        return self.A * v**self.gamma + self.B * v**(-self.beta)

    def hp(self, v):
        return (self.A * self.gamma * v**(self.gamma - 1)
                - self.B * self.beta * v**(-self.beta - 1))

    def hpp(self, v):
        g, b = self.gamma, self.beta
        return (self.A * g * (g - 1) * v**(g - 2)
                + self.B * b * (b + 1) * v**(-b - 2))

    def hppp(self, v):
        g, b = self.gamma, self.beta
        return (self.A * g * (g - 1) * (g - 2) * v**(g - 3)
                - self.B * b * (b + 1) * (b + 2) * v**(-b - 3))


@dataclass(frozen=True)
class LinearLogEnergy(EnergyFamily3D):
    """h(v) = L0 v - C ln v + D, L0, C > 0.

    Linear growth at infinity (h(v)/v -> L0), which keeps the mollified
    cavity energy finite: the family realising the surface-energy term.
    """

    L0: float = 1.0
    C: float = 1.0
    D: float = 1.0
    kind = "linear_log"

    def __post_init__(self):
        _require(self.L0 > 0, f"L0 must be positive, got {self.L0}")
        _require(self.C > 0, f"C must be positive, got {self.C}")
        # positivity of h on (0, inf), checked at the minimiser v = C/L0
        hmin = self.C - self.C * math.log(self.C / self.L0) + self.D
        _require(hmin > 0,
                 f"h must be positive; h(C/L0) = {hmin} <= 0 for D = {self.D}")

    def h(self, v):
        return self.L0 * v - self.C * np.log(v) + self.D

    def hp(self, v):
        return self.L0 - self.C / v

    def hpp(self, v):
        return self.C / v**2

    def hppp(self, v):
        return -2.0 * self.C / v**3


# ---------------------------------------------------------------------------
# 1-d stresses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StressFamily1D:
    """Base for softening 1-d stresses tau(u), tau' > 0 > tau''."""

    kind = "abstract"

    def tau(self, u):
        raise NotImplementedError

    def taup(self, u):
        raise NotImplementedError

    def taupp(self, u):
        raise NotImplementedError

    def W(self, u):
        """Stored energy W(u) = integral of tau from 1 to u."""
        raise NotImplementedError


@dataclass(frozen=True)
class ShiftedInversePowerStress(StressFamily1D):
    """tau(u) = tau_inf - u^(-p), p > 0.

    Bounded at infinity; tends to -inf under compression.  The stored
    energy diverges as u -> 0 only for p >= 1 (the validator flags p < 1).
    """

    tau_inf: float = 2.0
    p: float = 1.0
    kind = "shifted_inverse_power"

    def __post_init__(self):
        _require(self.p > 0, f"p must be positive, got {self.p}")

    def tau(self, u):
        return self.tau_inf - u**(-self.p)

    def taup(self, u):
        return self.p * u**(-self.p - 1)

    def taupp(self, u):
        return -self.p * (self.p + 1) * u**(-self.p - 2)

    def W(self, u):
        u = np.asarray(u, dtype=float)
        if self.p == 1.0:
            core = np.log(u)
        else:
            core = (u**(1.0 - self.p) - 1.0) / (1.0 - self.p)
        out = self.tau_inf * (u - 1.0) - core
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class PurePowerStress(StressFamily1D):
    """tau(u) = k u^q with 0 < q < 1 (shear-motion variant, unbounded tau)."""

    k: float = 1.0
    q: float = 0.5
    kind = "pure_power"

    def __post_init__(self):
        _require(self.k > 0, f"k must be positive, got {self.k}")
        _require(0.0 < self.q < 1.0, f"q must lie in (0,1), got {self.q}")

    def tau(self, u):
        return self.k * u**self.q

    def taup(self, u):
        return self.k * self.q * u**(self.q - 1)

    def taupp(self, u):
        return self.k * self.q * (self.q - 1) * u**(self.q - 2)

    def W(self, u):
        u = np.asarray(u, dtype=float)
        out = self.k * (u**(self.q + 1.0) - 1.0) / (self.q + 1.0)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class CustomStress(StressFamily1D):
    """User-supplied stress with declared growth data.

    Accepted on classification-only paths (the softening hypotheses are
    still sample-checked by ``validate``).  Exists mainly to exercise the
    linear-growth branch, which neither built-in family realises.
    """

    fn: Callable[[np.ndarray], np.ndarray] = None
    dfn: Callable[[np.ndarray], np.ndarray] = None
    d2fn: Callable[[np.ndarray], np.ndarray] = None
    declared_L: float = 0.0
    declared_tau_inf: float = math.inf
    kind = "custom"

    def __post_init__(self):
        _require(self.fn is not None, "fn is required for a custom stress")
        _require(self.declared_L >= 0, "declared_L must be nonnegative")

    def tau(self, u):
        return self.fn(np.asarray(u, dtype=float))

    def taup(self, u):
        if self.dfn is not None:
            return self.dfn(np.asarray(u, dtype=float))
        return _central_diff(self.fn, u)

    def taupp(self, u):
        if self.d2fn is not None:
            return self.d2fn(np.asarray(u, dtype=float))
        return _central_diff(self.taup, u)

    def W(self, u):
        from scipy.integrate import quad
        scalar = np.isscalar(u)
        us = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.array([quad(self.fn, 1.0, ui, limit=200)[0] for ui in us])
        return float(out[0]) if scalar else out


def _central_diff(f, u, rel=1e-6):
    u = np.asarray(u, dtype=float)
    step = rel * np.maximum(np.abs(u), 1.0)
    return (f(u + step) - f(u - step)) / (2.0 * step)


def linear_growth_stress(L: float = 1.0) -> CustomStress:
    """tau(u) = L u - 1/u: softening (tau''<0) with tau(u)/u -> L > 0."""
    return CustomStress(
        fn=lambda u: L * u - 1.0 / u,
        dfn=lambda u: L + u**-2,
        d2fn=lambda u: -2.0 * u**-3,
        declared_L=L,
        declared_tau_inf=math.inf,
    )


# ---------------------------------------------------------------------------
# pointwise evaluations
# ---------------------------------------------------------------------------

def _as_float_array(x) -> np.ndarray:
    """asarray preserving any floating dtype (extended precision included)."""
    x = np.asarray(x)
    return x if x.dtype.kind == "f" else x.astype(float)


def h_derivs(fam: EnergyFamily3D, v) -> tuple:
    """(h, h', h'', h''') at v > 0."""
    if np.any(np.asarray(v) <= 0):
        raise ConstitutiveError(f"h is defined for v > 0, got v = {v}")
    return fam.h(v), fam.hp(v), fam.hpp(v), fam.hppp(v)


class PhiPartials(NamedTuple):
    Phi: float
    Phi1: float
    Phi2: float
    Phi11: float
    Phi12: float
    Phi111: float


def phi_partials(fam: EnergyFamily3D, a, b) -> PhiPartials:
    """Partials of Phi at the radial state (v1, v2, v3) = (a, b, b).

    Phi    = (a^2 + 2 b^2)/2 + h(a b^2)
    Phi1   = a + h'(a b^2) b^2          Phi2  = b + h'(a b^2) a b
    Phi11  = 1 + h''(a b^2) b^4         Phi12 = h'(a b^2) b + h''(a b^2) a b^3
    Phi111 = h'''(a b^2) b^6  (< 0 by family construction)
    """
    a = _as_float_array(a)
    b = _as_float_array(b)
    if np.any(a <= 0) or np.any(b <= 0):
        raise ConstitutiveError("phi_partials requires positive stretches")
    J = a * b * b
    hp, hpp, hppp = fam.hp(J), fam.hpp(J), fam.hppp(J)
    return PhiPartials(
        Phi=0.5 * (a * a + 2.0 * b * b) + fam.h(J),
        Phi1=a + hp * b * b,
        Phi2=b + hp * a * b,
        Phi11=1.0 + hpp * b**4,
        Phi12=hp * b + hpp * a * b**3,
        Phi111=hppp * b**6,
    )


def p_coefficient(fam: EnergyFamily3D, a, b):
    """P(a, b) = 1 + a b^3 h''(a b^2), the strictly-above-one factor
    multiplying (a - b) in the similarity ODE.

    Algebraically identical to Phi12 + (Phi1 - Phi2)/(a - b) for a != b.
    """
    a = _as_float_array(a)
    b = _as_float_array(b)
    if np.any(a <= 0) or np.any(b <= 0):
        raise ConstitutiveError("p_coefficient requires positive stretches")
    return 1.0 + a * b**3 * fam.hpp(a * b * b)


def cavity_pressure_root(fam: EnergyFamily3D, bracket=(1e-8, 1e8)) -> float:
    """Specific volume H with h'(H) = 0: the stress-free cavity state.

    The radial Cauchy stress at the cavity wall reduces to h' of the
    cavity specific volume, so a traction-free cavity pins v(0) = H.
    """
    lo, hi = bracket
    flo, fhi = fam.hp(lo), fam.hp(hi)
    grow = 0
    while flo * fhi > 0 and grow < 8:
        lo, hi = lo * 1e-2, hi * 1e2
        flo, fhi = fam.hp(lo), fam.hp(hi)
        grow += 1
    if flo * fhi > 0:
        raise ConstitutiveError(
            f"no sign change of h' on [{lo:g}, {hi:g}]; cannot locate the "
            "stress-free cavity volume")
    return brentq(fam.hp, lo, hi, xtol=1e-13, rtol=8.9e-16)


# ---------------------------------------------------------------------------
# growth classification (symbolic, by family kind)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthReport:
    """Growth limits that drive the mollified-residual dichotomy.

    l_3d             lim h(u)/u          (3-d families)
    slic_indicator_3d lim h'(u^3)/u      (zero iff the cavity is admissible
                                          as a mollified limit)
    l_1d             lim tau(u)/u        (1-d families)
    tau_infinity     lim tau(u)
    """

    l_3d: float | None = None
    slic_indicator_3d: float | None = None
    l_1d: float | None = None
    tau_infinity: float | None = None

    @property
    def decays(self) -> bool:
        """True when the relevant indicator vanishes (residual -> 0)."""
        if self.slic_indicator_3d is not None:
            return self.slic_indicator_3d == 0.0
        return self.l_1d == 0.0


def growth(fam) -> GrowthReport:
    """Symbolic growth classification from the family kind and exponents."""
    if isinstance(fam, PowerLawEnergy):
        expo = 3.0 * fam.gamma - 4.0
        if expo < 0:
            ind = 0.0
        elif expo == 0:
            ind = fam.A * fam.gamma
        else:
            ind = math.inf
        return GrowthReport(l_3d=math.inf, slic_indicator_3d=ind)
    if isinstance(fam, LinearLogEnergy):
        return GrowthReport(l_3d=fam.L0, slic_indicator_3d=0.0)
    if isinstance(fam, ShiftedInversePowerStress):
        return GrowthReport(l_1d=0.0, tau_infinity=fam.tau_inf)
    if isinstance(fam, PurePowerStress):
        return GrowthReport(l_1d=0.0, tau_infinity=math.inf)
    if isinstance(fam, CustomStress):
        return GrowthReport(l_1d=fam.declared_L,
                            tau_infinity=fam.declared_tau_inf)
    raise ConstitutiveError(f"unknown family {fam!r}")


def residual_rate_exponent(fam: EnergyFamily3D) -> float:
    """Predicted power of n for the cavity-layer residual, from h'(n^3)/n."""
    if isinstance(fam, PowerLawEnergy):
        return 3.0 * fam.gamma - 4.0
    if isinstance(fam, LinearLogEnergy):
        return -1.0
    raise ConstitutiveError(f"no residual-rate prediction for {fam!r}")


# ---------------------------------------------------------------------------
# hypothesis validation
# ---------------------------------------------------------------------------

_SAMPLE_GRID = np.geomspace(1e-3, 1e3, 256)


@dataclass
class ValidationReport:
    ok: bool = True
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def fail(self, condition: str, witness) -> None:
        self.ok = False
        self.failures.append({"condition": condition, "witness": witness})


def validate(fam) -> ValidationReport:
    """Sampled sign checks of the convexity/softening hypotheses plus
    symbolic growth checks; failures carry a witness sample point."""
    rep = ValidationReport()
    if isinstance(fam, EnergyFamily3D):
        v = _SAMPLE_GRID
        bad = np.asarray(fam.hpp(v)) <= 0
        if bad.any():
            rep.fail("h'' > 0", float(v[bad][0]))
        bad = np.asarray(fam.hppp(v)) >= 0
        if bad.any():
            rep.fail("h''' < 0", float(v[bad][0]))
        # blow-up at both ends holds for both families by construction
        if isinstance(fam, LinearLogEnergy):
            vmin = fam.C / fam.L0
            if fam.h(vmin) <= 0:
                rep.fail("h > 0 on (0, inf)", vmin)
        rep.notes.append("h -> inf at 0+ and inf (symbolic, by kind)")
        return rep
    if isinstance(fam, StressFamily1D):
        u = _SAMPLE_GRID
        bad = np.asarray(fam.taup(u)) <= 0
        if bad.any():
            rep.fail("tau' > 0", float(u[bad][0]))
        bad = np.asarray(fam.taupp(u)) >= 0
        if bad.any():
            rep.fail("tau'' < 0", float(u[bad][0]))
        if isinstance(fam, ShiftedInversePowerStress):
            # tau -> -inf as u -> 0+ holds for every p > 0; the stored
            # energy diverges there only for p >= 1
            if fam.p < 1.0:
                rep.fail("W(u) -> +inf as u -> 0+", fam.p)
            rep.notes.append("tau -> -inf as u -> 0+ (symbolic)")
        elif isinstance(fam, PurePowerStress):
            rep.notes.append("compression hypothesis waived (shear variant)")
        return rep
    raise ConstitutiveError(f"unknown family {fam!r}")
