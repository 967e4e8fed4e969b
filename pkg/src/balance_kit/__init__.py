"""Impact-aware balance criteria for legged-robot stances.

Computes the CoM-velocity balance area of a multi-contact stance
(a zero-step capture region for non-coplanar contacts), the polytope of
candidate post-impact impulses and CoM velocities, and the maximum contact
velocity an intentional impact may have without breaking balance.
"""

__version__ = "0.1.0"

from . import errors
from .impact import (
    FrictionCone,
    ImpulseSet,
    PostImpactSet,
    delta_comd_set,
    friction_cone,
    impulse_set,
    post_impact_set,
)
from .lipm import LipmState, SsrInterval, pendulum_constant, simulate_phase, ssr, zmp_from_wrench
from .maxvel import MaxvelOptions, MaxVelResult, assemble_qp, max_contact_velocity
from .optim import LpProblem, QpProblem, SolveResult, SolveStatus, solve_lp, solve_qp
from .polytope import (
    HalfspaceSet2,
    Polygon2,
    contains,
    hausdorff,
    hull2d,
    inflated_halfspaces,
    to_halfspaces,
)
from .region import RegionOptions, RegionResult, compute_region, zmp_support_area
from .stance import (
    ContactSpec,
    DynamicsData,
    ImpactSpec,
    StanceSpec,
    crb_inverse_inertia,
    load_stance,
)
from .wrench import (
    WrenchProblem,
    assemble,
    comd_boundary_map,
    cwc_inertial,
    cwc_local,
    lipm_equalities,
    torque_limit_rows,
    wrench_map,
)

__all__ = [
    "__version__",
    "errors",
    # polytope
    "Polygon2", "HalfspaceSet2", "hull2d", "to_halfspaces", "contains",
    "hausdorff", "inflated_halfspaces",
    # optim
    "LpProblem", "QpProblem", "SolveResult", "SolveStatus", "solve_lp", "solve_qp",
    # stance
    "ContactSpec", "StanceSpec", "DynamicsData", "ImpactSpec", "load_stance",
    "crb_inverse_inertia",
    # wrench
    "WrenchProblem", "assemble", "cwc_local", "cwc_inertial", "wrench_map",
    "torque_limit_rows", "lipm_equalities", "comd_boundary_map",
    # lipm
    "LipmState", "SsrInterval", "pendulum_constant", "ssr", "simulate_phase",
    "zmp_from_wrench",
    # region
    "RegionOptions", "RegionResult", "compute_region", "zmp_support_area",
    # impact
    "FrictionCone", "ImpulseSet", "PostImpactSet", "friction_cone",
    "impulse_set", "delta_comd_set", "post_impact_set",
    # maxvel
    "MaxvelOptions", "MaxVelResult", "assemble_qp", "max_contact_velocity",
]
