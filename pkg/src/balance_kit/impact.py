"""Candidate impulse set of a frictional impact and the induced post-impact
CoM-velocity polytope.

Conventions: the impact contact frame's z-axis is the impacted surface's
outward normal, so an approaching end-effector has normal velocity
-v_n_pre <= 0 and the impulse on the robot points into the friction cone
around +z. All per-generator computations are independent and pure.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, JammedGeneratorWarning, NoValidImpulse
from .polytope import Polygon2, hull2d
from .stance import ImpactSpec

# Generators with normal gain e_z' W g below this are jammed: no impulse along
# them can produce the required normal velocity jump.
JAM_TOL = 1e-9


@dataclass(frozen=True)
class FrictionCone:
    """Inner (inscribed) discretization of a Coulomb cone, unit generators."""

    generators: np.ndarray  # 3 x n_mu, columns on the cone surface
    mu: float
    n_mu: int


@dataclass(frozen=True)
class ImpulseSet:
    """The 2 n_mu vertices of the candidate-impulse polytope.

    Vertex 2i pairs generator i with the upper restitution bound, vertex
    2i+1 with the lower one. dropped_generators lists jammed generator
    indices excluded from the (conservative) set.
    """

    vertices: np.ndarray          # k x 3 impulses, contact frame, N s
    sigmas: np.ndarray            # k nonnegative generator scalars
    generator_index: np.ndarray   # k ints, column of the cone per vertex
    cone: FrictionCone
    cr_min: float
    cr_max: float
    v_n_pre: float
    dropped_generators: tuple = ()

    def __len__(self):
        return len(self.sigmas)


@dataclass(frozen=True)
class PostImpactSet:
    """Convex hull of candidate post-impact planar CoM velocities."""

    polygon: Polygon2
    pre_comd: np.ndarray


def friction_cone(mu: float, n_mu: int) -> FrictionCone:
    """n_mu unit generators on the cone surface, azimuths 2*pi*k/n_mu.

    The inscribed polyhedral cone is conservative: every generator satisfies
    Coulomb with equality and the hull lies inside the true cone.
    """
    if mu <= 0:
        raise InvalidInput("mu must be positive")
    if n_mu < 3:
        raise InvalidInput("n_mu must be at least 3")
    theta = 2.0 * np.pi * np.arange(n_mu) / n_mu
    raw = np.stack([mu * np.cos(theta), mu * np.sin(theta), np.ones(n_mu)])
    return FrictionCone(generators=raw / np.linalg.norm(raw, axis=0), mu=mu, n_mu=n_mu)


def impulse_set(spec: ImpactSpec, v_n_pre: float) -> ImpulseSet:
    """Vertices of the impulse polytope for a given approach speed.

    Each kept generator i yields two vertices lambda = C[:, i] * sigma with
    sigma solving (c_r + 1) v_n_pre = e_z' W C[:, i] sigma for the upper and
    lower restitution coefficient: the friction-cone ray intersected with the
    two planes of restitution. Jammed generators (nonpositive normal gain)
    are dropped with a warning, shrinking the set conservatively.
    """
    if v_n_pre < 0:
        raise InvalidInput("v_n_pre must be a nonnegative approach speed")
    cone = friction_cone(spec.mu_impact, spec.n_mu)
    gains = spec.e_z @ spec.w_inv @ cone.generators  # n_mu normal gains
    kept = np.flatnonzero(gains > JAM_TOL)
    dropped = tuple(int(i) for i in np.flatnonzero(gains <= JAM_TOL))
    if dropped:
        warnings.warn(
            f"dropped jammed friction-cone generators {list(dropped)}",
            JammedGeneratorWarning, stacklevel=2,
        )
    if len(kept) == 0:
        raise NoValidImpulse("every friction-cone generator is jammed")
    sigmas = []
    vertices = []
    gen_idx = []
    for i in kept:
        for cr in (spec.cr_max, spec.cr_min):
            sigma = (cr + 1.0) * v_n_pre / gains[i]
            sigmas.append(sigma)
            vertices.append(cone.generators[:, i] * sigma)
            gen_idx.append(i)
    return ImpulseSet(
        vertices=np.array(vertices).reshape(-1, 3),
        sigmas=np.array(sigmas),
        generator_index=np.array(gen_idx, dtype=int),
        cone=cone,
        cr_min=spec.cr_min,
        cr_max=spec.cr_max,
        v_n_pre=float(v_n_pre),
        dropped_generators=dropped,
    )


def restitution_residuals(s: ImpulseSet, spec: ImpactSpec) -> np.ndarray:
    """Residual of each vertex against its plane of restitution.

    The plane for coefficient c_r is e_z' W lambda = (1 + c_r) v_n_pre, the
    normal velocity jump that takes -v_n_pre to +c_r v_n_pre.
    """
    jumps = s.vertices @ spec.w_inv @ spec.e_z
    cr = np.where(np.arange(len(s)) % 2 == 0, s.cr_max, s.cr_min)
    return jumps - (1.0 + cr) * s.v_n_pre


def delta_comd_set(s: ImpulseSet, rotation, mass: float) -> np.ndarray:
    """Candidate CoM velocity jumps (1/m) R lambda, one row per vertex."""
    rotation = np.asarray(rotation, dtype=float).reshape(3, 3)
    if np.linalg.norm(rotation.T @ rotation - np.eye(3)) > 1e-9:
        raise InvalidInput("rotation must be orthonormal")
    if mass <= 0:
        raise InvalidInput("mass must be positive")
    return (s.vertices @ rotation.T) / mass


def post_impact_set(pre_comd, deltas) -> PostImpactSet:
    """Hull of pre-impact velocity plus the planar part of each jump."""
    pre = np.asarray(pre_comd, dtype=float).reshape(2)
    deltas = np.asarray(deltas, dtype=float).reshape(-1, 3)
    points = pre[None, :] + deltas[:, :2]
    return PostImpactSet(polygon=hull2d(points), pre_comd=pre)
