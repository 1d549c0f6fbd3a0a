"""cavitas: self-similar cavitation and fracture fans.

Solvers for the radial cavitating solutions of nonlinear elastodynamics,
their mechanical-energy audit, the one-dimensional fracture fan, and the
mollified-residual machinery that decides whether those singular motions
survive as limits of smooth approximate solutions.
"""
from ._kernels import BACKEND as KERNEL_BACKEND
from .constitutive import (
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
from .cavity import (
    CavitySolution,
    IntegrationControls,
    NoCavitatingSolution,
    ShootControls,
    critical_stretch,
    integrate_from_cavity,
    rh_residual,
    shoot_cavity_solution,
)
from .energy_audit import (
    energy_delta_closed,
    energy_delta_quadrature,
    energy_report,
    shock_production,
)
from .fracture1d import build_fan, energy_production, eval_Y, eval_y, slic_classify_1d
from .mollify import MollifierSpec, RadialMotion, det_positivity, mollify_radial
from .slic import (
    discrepancy_scaling,
    residual_ladder_1d,
    residual_ladder_3d,
    slic_energy_ladder,
    weak_residual_1d,
    weak_residual_3d,
)

__version__ = "0.1.0"
