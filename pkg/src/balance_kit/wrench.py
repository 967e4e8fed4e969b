"""Linear constraints on stacked contact wrenches: contact wrench cones,
actuation-torque limits, the pendulum equality block, and the map from
wrenches to boundary CoM velocities.

Ordering conventions, fixed once here: the stacked wrench W holds one
(force; torque) 6-block per contact, expressed with the inertial frame's
orientation at the contact point. The local wrench cone matrix acts on
(torque; force) blocks in the contact's own frame; cwc_inertial applies the
permutation and the frame rotation so its rows act directly on W's blocks.
"""

from dataclasses import dataclass

import numpy as np

from .errors import FeatureUnavailable, InvalidInput
from .stance import ContactSpec, DynamicsData, StanceSpec, skew

# Sanity box |W_k| <= BOX_FACTOR * m * g on every wrench component: the cones
# are unbounded and ray-shooting LPs need bounded optima. Far above any
# physical contact load; reported when active.
BOX_FACTOR = 50.0

# Projection planes closer to the CoM height than this make the pendulum map
# singular.
MIN_PLANE_GAP = 1e-6


def cwc_local(contact: ContactSpec) -> np.ndarray:
    """16x6 wrench-cone matrix of a rectangular contact in its own frame.

    Acts on local (torque; force) wrenches: rows 0-3 are the linearized
    friction pyramid, rows 4-7 the patch tipping bounds, rows 8-15 couple the
    yaw torque with friction and patch size.
    """
    mu, x, y = contact.mu, contact.half_x, contact.half_y
    s = (x + y) * mu
    return np.array([
        [0, 0, 0, -1, 0, -mu],
        [0, 0, 0, 1, 0, -mu],
        [0, 0, 0, 0, -1, -mu],
        [0, 0, 0, 0, 1, -mu],
        [-1, 0, 0, 0, 0, -y],
        [1, 0, 0, 0, 0, -y],
        [0, -1, 0, 0, 0, -x],
        [0, 1, 0, 0, 0, -x],
        [mu, mu, -1, -y, -x, -s],
        [mu, -mu, -1, -y, x, -s],
        [-mu, mu, -1, y, -x, -s],
        [-mu, -mu, -1, y, x, -s],
        [mu, mu, 1, y, x, -s],
        [mu, -mu, 1, y, -x, -s],
        [-mu, mu, 1, -y, x, -s],
        [-mu, -mu, 1, -y, -x, -s],
    ], dtype=float)


def cwc_inertial(contact: ContactSpec) -> np.ndarray:
    """Wrench-cone rows acting on the contact's (force; torque) block of W.

    Composition of the local cone with the (force; torque) -> (torque; force)
    permutation and the inertial-to-local rotation of both 3-blocks.
    """
    rt = contact.rotation.T
    to_local_tf = np.zeros((6, 6))
    to_local_tf[:3, 3:] = rt  # local torque from inertial-orientation torque
    to_local_tf[3:, :3] = rt  # local force from inertial-orientation force
    return cwc_local(contact) @ to_local_tf


def wrench_map(stance: StanceSpec) -> np.ndarray:
    """6 x 6m map from the stacked wrench to the resultant at the origin.

    Per contact the block is [[I, 0], [skew(p), I]]: forces add directly and
    contribute lever-arm torques p x f.
    """
    if stance.n_contacts < 1:
        raise InvalidInput("stance has no contacts")
    blocks = []
    for c in stance.contacts:
        g = np.eye(6)
        g[3:, :3] = skew(c.position)
        blocks.append(g)
    return np.hstack(blocks)


def torque_limit_rows(dyn: DynamicsData) -> tuple[np.ndarray, np.ndarray]:
    """Actuation-limit half-spaces on the stacked wrench.

    From the equations of motion, B tau = M qdd + N - J' W must stay between
    B tau_min and B tau_max.
    """
    if dyn is None:
        raise FeatureUnavailable("joint-space dynamics data is absent")
    jt = dyn.J.T
    bias = dyn.M @ dyn.qdd_or_zero() + dyn.N
    upper = dyn.B @ dyn.tau_max - bias
    lower = -(dyn.B @ dyn.tau_min) + bias
    a_t = np.vstack([-jt, jt])
    b_t = np.concatenate([upper, lower])
    return a_t, b_t


def lipm_equalities(stance: StanceSpec) -> tuple[np.ndarray, np.ndarray]:
    """Pendulum-assumption equality block (C, d) with C W = d.

    The four rows pin the resultant so that the supported weight equals m*g
    and the torque about the CoM vanishes in every direction: rows 0-2 are
    (h_c f + n x tau)/(m g) = c, row 3 is (n.tau - (n x c).f)/(m g) = 0.
    """
    n = stance.normal
    c = stance.com
    h_c = stance.com_height
    m4 = np.zeros((4, 6))
    m4[:3, :3] = h_c * np.eye(3)
    m4[:3, 3:] = skew(n)
    m4[3, :3] = -np.cross(n, c)
    m4[3, 3:] = n
    mg = stance.mass * stance.gravity
    cmat = (m4 / mg) @ wrench_map(stance)
    d = np.concatenate([c, [0.0]])
    return cmat, d


def comd_boundary_map(stance: StanceSpec, plane_height: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """(E, f) with boundary CoM velocity = E W + f.

    E scales the resultant-force rows of the wrench map by
    w (h - h_c) / (m g); f is w * com_xy, zero in the centered frame. Any
    plane height other than the CoM height is allowed.
    """
    h_c = stance.com_height
    if abs(plane_height - h_c) < MIN_PLANE_GAP:
        raise InvalidInput("projection plane at the CoM height makes the pendulum map singular")
    w = np.sqrt(stance.gravity / h_c)
    scale = w * (plane_height - h_c) / (stance.mass * stance.gravity)
    e = scale * wrench_map(stance)[:2, :]
    f = w * stance.com[:2]
    return e, f


def zmp_map(stance: StanceSpec, plane_height: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """(E, f) with the ZMP on the given plane = E W + f, in stance coordinates."""
    h_c = stance.com_height
    if abs(plane_height - h_c) < MIN_PLANE_GAP:
        raise InvalidInput("projection plane at the CoM height makes the ZMP map singular")
    scale = (plane_height - h_c) / (stance.mass * stance.gravity)
    e = scale * wrench_map(stance)[:2, :]
    f = stance.com[:2].copy()
    return e, f


@dataclass(frozen=True)
class WrenchProblem:
    """Stacked constraint system over W in R^(6m).

    a_in W <= b_in collects the per-contact cones and, when dynamics data is
    present, the torque limits; c_eq W = d_eq is the 4-row pendulum block;
    boundary CoM velocity is e_map W + f_off. row_labels maps each a_in row
    block to its origin; box_bound is the per-component |W_k| safeguard.
    """

    a_in: np.ndarray
    b_in: np.ndarray
    c_eq: np.ndarray
    d_eq: np.ndarray
    e_map: np.ndarray
    f_off: np.ndarray
    row_labels: tuple
    box_bound: float
    torque_limits_included: bool

    @property
    def n_vars(self):
        return self.a_in.shape[1]


def assemble(stance: StanceSpec, plane_height: float = 0.0) -> WrenchProblem:
    """Build the full wrench-space problem for a stance.

    The stance is first re-expressed with the origin under the CoM (the frame
    every formula here assumes); see StanceSpec.centered.
    """
    stance = stance.centered().validate()
    m = stance.n_contacts
    rows = []
    labels = []
    for i, contact in enumerate(stance.contacts):
        block = np.zeros((16, 6 * m))
        block[:, 6 * i:6 * i + 6] = cwc_inertial(contact)
        rows.append(block)
        labels.append((f"cwc_{i}", 16 * i, 16 * (i + 1)))
    a_in = np.vstack(rows)
    b_in = np.zeros(a_in.shape[0])
    included = False
    if stance.dynamics is not None:
        a_t, b_t = torque_limit_rows(stance.dynamics)
        labels.append(("torque_limits", a_in.shape[0], a_in.shape[0] + a_t.shape[0]))
        a_in = np.vstack([a_in, a_t])
        b_in = np.concatenate([b_in, b_t])
        included = True
    c_eq, d_eq = lipm_equalities(stance)
    e_map, f_off = comd_boundary_map(stance, plane_height)
    return WrenchProblem(
        a_in=a_in, b_in=b_in, c_eq=c_eq, d_eq=d_eq, e_map=e_map, f_off=f_off,
        row_labels=tuple(labels),
        box_bound=BOX_FACTOR * stance.mass * stance.gravity,
        torque_limits_included=included,
    )
