"""Maximum balance-aware contact velocity.

Pipeline: assemble the wrench problem, project the CoM-velocity balance
area, then solve a QP whose variables are the tracked contact speed and the
impulse-vertex generator scalars. Restitution equalities tie every scalar to
the approach speed, and containment of every candidate post-impact CoM
velocity in the balance area caps it: at the optimum either the reference is
reached or a post-impact vertex touches the region boundary.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    FeatureUnavailable,
    InvalidImpactDirection,
    InvalidInput,
    NoValidImpulse,
    SolverFailure,
)
from .impact import JAM_TOL, friction_cone, post_impact_set
from .optim import QpProblem, solve_qp
from .polytope import HalfspaceSet2, inflated_halfspaces
from .region import RegionOptions, RegionResult, compute_region
from .stance import ImpactSpec, StanceSpec

ACTIVE_TOL = 1e-6


@dataclass(frozen=True)
class MaxvelOptions:
    region_options: RegionOptions = field(default_factory=RegionOptions)
    region: RegionResult | None = None              # reuse a projected region
    region_halfspaces: HalfspaceSet2 | None = None  # or override (G, h) directly
    full_qdot: bool = False
    inflate_eps: float = 1e-9


@dataclass(frozen=True)
class QpAssembly:
    """A QP plus the bookkeeping to interpret its solution."""

    problem: QpProblem
    generator_index: np.ndarray   # impulse vertex -> cone column
    vertex_maps: np.ndarray       # impulse vertex -> planar comd jump per unit sigma
    row_families: tuple           # family tag per inequality row
    normal_gain: float | None     # reduced mode: approach speed per unit s
    n_qd: int                     # leading q-dot variables (0 in reduced mode)
    cone_generators: np.ndarray
    flags: dict


@dataclass(frozen=True)
class MaxVelResult:
    status: str
    s_star: float
    v_star: np.ndarray
    sigma_star: np.ndarray
    post_impact: object
    active_vertices: tuple
    diagnostics: dict

    @property
    def optimal(self):
        return self.status == "optimal"


def _region_halfspaces(region: RegionResult, eps: float) -> HalfspaceSet2:
    # the inner polygon is the conservative side of the projection
    return inflated_halfspaces(region.inner, eps)


def _kept_generators(impact: ImpactSpec):
    cone = friction_cone(impact.mu_impact, impact.n_mu)
    gains = impact.e_z @ impact.w_inv @ cone.generators
    kept = np.flatnonzero(gains > JAM_TOL)
    dropped = tuple(int(i) for i in np.flatnonzero(gains <= JAM_TOL))
    if len(kept) == 0:
        raise NoValidImpulse("every friction-cone generator is jammed")
    return cone, gains, kept, dropped


def assemble_qp(stance: StanceSpec, impact: ImpactSpec, region_hs: HalfspaceSet2,
                full_qdot: bool = False) -> QpAssembly:
    """Build the contact-velocity QP against a region in half-space form.

    Reduced mode: variables (s, sigma), contact velocity s * v_ref_hat, and
    the approach speed is gamma * s with gamma the (positive) normal
    component of the approach direction. Full mode swaps s for the joint
    velocity vector, with the impact-point Jacobian providing the contact
    velocity; a 1e-9 Tikhonov term picks the minimum-norm joint motion in
    the Jacobian's null space.
    """
    speed_ref = float(np.linalg.norm(impact.v_ref))
    if speed_ref <= 0:
        raise InvalidInput("v_ref must be nonzero")
    v_hat = impact.v_ref / speed_ref
    gamma = float(-(impact.e_z @ impact.rotation.T @ v_hat))
    if not full_qdot and gamma <= 1e-9:
        raise InvalidImpactDirection(
            "reference velocity has no positive approach component along the impact normal")

    cone, gains, kept, dropped = _kept_generators(impact)
    n_vertices = 2 * len(kept)
    gen_index = np.repeat(kept, 2)
    cr_seq = np.tile([impact.cr_max, impact.cr_min], len(kept))

    dyn = stance.dynamics
    if full_qdot:
        if dyn is None or dyn.j_imp is None:
            raise FeatureUnavailable("full_qdot mode needs dynamics data with j_imp")
        n_qd = dyn.dof
    else:
        n_qd = 1  # the scalar speed s
    n = n_qd + n_vertices

    # planar CoM-velocity jump per unit sigma, one 2-vector per vertex
    mapped = (impact.rotation @ cone.generators[:, gen_index]) / stance.mass
    vertex_maps = mapped[:2, :].T

    # objective
    Q = np.zeros((n, n))
    q = np.zeros(n)
    if full_qdot:
        v_ref_contact = impact.rotation.T @ impact.v_ref
        Q[:n_qd, :n_qd] = 2.0 * (dyn.j_imp.T @ dyn.j_imp) + 2e-9 * np.eye(n_qd)
        q[:n_qd] = -2.0 * dyn.j_imp.T @ v_ref_contact
    else:
        Q[0, 0] = 2.0
        q[0] = -2.0 * speed_ref

    # restitution equalities: gain_i sigma_k = (1 + cr_k) * approach speed
    a_eq = np.zeros((n_vertices, n))
    for k in range(n_vertices):
        a_eq[k, n_qd + k] = gains[gen_index[k]]
        if full_qdot:
            a_eq[k, :n_qd] = (1.0 + cr_seq[k]) * (impact.e_z @ dyn.j_imp)
        else:
            a_eq[k, 0] = -(1.0 + cr_seq[k]) * gamma
    b_eq = np.zeros(n_vertices)

    rows = []
    rhs = []
    families = []

    def add(row, bound, family):
        rows.append(row)
        rhs.append(bound)
        families.append(family)

    # nonnegative speed / approaching motion, nonnegative scalars
    if full_qdot:
        row = np.zeros(n)
        row[:n_qd] = impact.e_z @ dyn.j_imp  # normal velocity <= 0 (approaching)
        add(row, 0.0, "approach")
    else:
        row = np.zeros(n)
        row[0] = -1.0
        add(row, 0.0, "speed_nonneg")
    for k in range(n_vertices):
        row = np.zeros(n)
        row[n_qd + k] = -1.0
        add(row, 0.0, "sigma_nonneg")

    # region containment of every candidate post-impact vertex
    pre = impact.pre_comd
    for k in range(n_vertices):
        coeffs = region_hs.G @ vertex_maps[k]
        for j in range(len(region_hs)):
            row = np.zeros(n)
            row[n_qd + k] = coeffs[j]
            add(row, float(region_hs.h[j] - region_hs.G[j] @ pre), f"region:{k}")

    flags = {"joint_velocity_rows": "skipped:no_dynamics",
             "joint_torque_rows": "skipped:no_dynamics"}
    if dyn is not None:
        lam_cols = cone.generators[:, gen_index]  # 3 x n_vertices
        if dyn.l_qd is not None and dyn.qd_min is not None and dyn.qd_max is not None:
            qd_pre = dyn.qd_pre if dyn.qd_pre is not None else np.zeros(dyn.dof)
            jump = dyn.l_qd @ lam_cols  # dof x n_vertices, per unit sigma
            for k in range(n_vertices):
                for r in range(dyn.dof):
                    row = np.zeros(n)
                    row[n_qd + k] = jump[r, k]
                    if full_qdot:
                        row[r] += 1.0  # post-impact velocity builds on the variable
                        add(row, float(dyn.qd_max[r]), "joint_velocity")
                        row2 = -row
                        add(row2, float(-dyn.qd_min[r]), "joint_velocity")
                    else:
                        add(row, float(dyn.qd_max[r] - qd_pre[r]), "joint_velocity")
                        row2 = np.zeros(n)
                        row2[n_qd + k] = -jump[r, k]
                        add(row2, float(qd_pre[r] - dyn.qd_min[r]), "joint_velocity")
            flags["joint_velocity_rows"] = "included"
        elif dyn.l_qd is None:
            flags["joint_velocity_rows"] = "skipped:no_l_qd"
        else:
            flags["joint_velocity_rows"] = "skipped:no_qd_bounds"

        if dyn.j_imp is not None:
            tau_pre = dyn.tau_pre if dyn.tau_pre is not None else np.zeros(dyn.n_joints)
            scale = impact.torque_ratio / impact.delta_t
            tau_jump = scale * (dyn.B.T @ dyn.j_imp.T @ lam_cols)  # n_joints x n_vertices
            for k in range(n_vertices):
                for r in range(dyn.n_joints):
                    row = np.zeros(n)
                    row[n_qd + k] = tau_jump[r, k]
                    add(row, float(dyn.tau_max[r] - tau_pre[r]), "joint_torque")
                    row2 = np.zeros(n)
                    row2[n_qd + k] = -tau_jump[r, k]
                    add(row2, float(tau_pre[r] - dyn.tau_min[r]), "joint_torque")
            flags["joint_torque_rows"] = "included"
        else:
            flags["joint_torque_rows"] = "skipped:no_j_imp"

        if full_qdot and dyn.qd_min is not None and dyn.qd_max is not None:
            for r in range(dyn.dof):
                row = np.zeros(n)
                row[r] = 1.0
                add(row, float(dyn.qd_max[r]), "qd_bounds")
                row2 = np.zeros(n)
                row2[r] = -1.0
                add(row2, float(-dyn.qd_min[r]), "qd_bounds")

    problem = QpProblem(Q=Q, q=q, a_in=np.array(rows), b_in=np.array(rhs),
                        a_eq=a_eq, b_eq=b_eq)
    flags["dropped_generators"] = dropped
    return QpAssembly(
        problem=problem,
        generator_index=gen_index,
        vertex_maps=vertex_maps,
        row_families=tuple(families),
        normal_gain=None if full_qdot else gamma,
        n_qd=0 if not full_qdot else n_qd,
        cone_generators=cone.generators,
        flags=flags,
    )


def _interpret(assembly: QpAssembly, impact: ImpactSpec, stance: StanceSpec,
               region_hs: HalfspaceSet2, res, timings) -> MaxVelResult:
    x = res.x
    n_qd = assembly.n_qd if assembly.n_qd else 1
    sigma = x[n_qd:]
    if assembly.n_qd:  # full joint-velocity mode
        dyn = stance.dynamics
        v_contact = dyn.j_imp @ x[:n_qd]
        s_star = float(np.linalg.norm(v_contact))
        v_star = impact.rotation @ v_contact
    else:
        s_star = float(x[0])
        v_star = s_star * impact.v_ref / np.linalg.norm(impact.v_ref)

    deltas3 = (impact.rotation @ assembly.cone_generators[:, assembly.generator_index]) * sigma
    deltas3 = (deltas3 / stance.mass).T
    post = post_impact_set(impact.pre_comd, deltas3)

    vertices_xy = impact.pre_comd[None, :] + assembly.vertex_maps * sigma[:, None]
    active = []
    for k, y in enumerate(vertices_xy):
        if np.max(region_hs.G @ y - region_hs.h) >= -ACTIVE_TOL:
            active.append(k)

    binding = sorted({assembly.row_families[i].split(":")[0] for i in res.active_set})
    diag = {
        "binding_families": tuple(binding),
        "kkt_residual": res.kkt_residual,
        "timings": timings,
        **assembly.flags,
    }
    return MaxVelResult(
        status="optimal",
        s_star=s_star,
        v_star=v_star,
        sigma_star=sigma.copy(),
        post_impact=post,
        active_vertices=tuple(active),
        diagnostics=diag,
    )


def max_contact_velocity(stance: StanceSpec, impact: ImpactSpec,
                         opts: MaxvelOptions | None = None) -> MaxVelResult:
    """Run the full pipeline and return the maximum trackable contact velocity.

    Deterministic for fixed inputs and options. Raises StanceInfeasible,
    NoValidImpulse, InvalidImpactDirection, or SolverFailure with the
    offending stage.
    """
    opts = opts or MaxvelOptions()
    timings = {}
    t0 = time.perf_counter()
    if opts.region_halfspaces is not None:
        region_hs = opts.region_halfspaces
    else:
        region = opts.region or compute_region(stance, opts.region_options)
        region_hs = _region_halfspaces(region, opts.inflate_eps)
    timings["region_s"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    assembly = assemble_qp(stance, impact, region_hs, full_qdot=opts.full_qdot)
    res = solve_qp(assembly.problem)
    timings["qp_s"] = time.perf_counter() - t1
    if not res.optimal:
        raise SolverFailure("qp", f"{res.status.value}: {res.message}")
    return _interpret(assembly, impact, stance, region_hs, res, timings)
