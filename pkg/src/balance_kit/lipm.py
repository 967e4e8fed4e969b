"""Linear-inverted-pendulum analytics: pendulum constant, 1-D stable standing
region, phase-portrait simulation, and ZMP extraction from a resultant wrench.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLoad, InvalidInput

DIVERGENCE_LIMIT = 10.0  # |c_x| beyond this many meters counts as a fall


@dataclass(frozen=True)
class LipmState:
    c_x: float
    cd_x: float


@dataclass(frozen=True)
class SsrInterval:
    lo: float
    hi: float

    def __contains__(self, value):
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class PhaseTrajectory:
    """Sampled (t, c_x, cd_x, z_x) rows plus the converge/diverge verdict."""

    times: np.ndarray
    c: np.ndarray
    cd: np.ndarray
    z: np.ndarray
    converges: bool

    def rows(self):
        return np.column_stack([self.times, self.c, self.cd, self.z])


def pendulum_constant(c_z, g=9.81):
    """w = sqrt(g / c_z), the LIPM divergence rate in 1/s."""
    if c_z <= 0 or g <= 0:
        raise InvalidInput("CoM height and gravity must be positive")
    return float(np.sqrt(g / c_z))


def ssr(zmp_lo, zmp_hi, c_x, w) -> SsrInterval:
    """CoM-velocity interval of the stable standing region.

    Saturated ZMP bounds imply c_x + cd_x / w in [zmp_lo, zmp_hi], i.e.
    cd_x in [w (zmp_lo - c_x), w (zmp_hi - c_x)].
    """
    if zmp_lo > zmp_hi:
        raise InvalidInput("zmp_lo exceeds zmp_hi")
    return SsrInterval(w * (zmp_lo - c_x), w * (zmp_hi - c_x))


def capture_point_policy(zmp_lo, zmp_hi, w):
    """Saturated proportional ZMP: track the instantaneous capture point.

    Inside the stable standing region this freezes the divergent component,
    so the converge/diverge boundary of the closed loop coincides with the
    region bounds.
    """

    def policy(c_x, cd_x):
        return float(np.clip(c_x + cd_x / w, zmp_lo, zmp_hi))

    return policy


def simulate_phase(x0: LipmState, zmp_bounds, w, dt=1e-3, horizon=10.0,
                   policy=None) -> PhaseTrajectory:
    """RK4 integration of cdd = w^2 (c - z) under a saturating ZMP policy.

    Classification: diverges once |c_x| exceeds 10 m (integration stops
    early), converges otherwise.
    """
    if not (0 < dt <= 0.01):
        raise InvalidInput("dt must be in (0, 0.01]")
    if horizon <= 0:
        raise InvalidInput("horizon must be positive")
    zmp_lo, zmp_hi = float(zmp_bounds[0]), float(zmp_bounds[1])
    if policy is None:
        policy = capture_point_policy(zmp_lo, zmp_hi, w)

    def f(state):
        c, cd = state
        return np.array([cd, w * w * (c - policy(c, cd))])

    steps = int(np.ceil(horizon / dt))
    ts = np.empty(steps + 1)
    cs = np.empty(steps + 1)
    cds = np.empty(steps + 1)
    zs = np.empty(steps + 1)
    state = np.array([x0.c_x, x0.cd_x], dtype=float)
    ts[0], cs[0], cds[0] = 0.0, state[0], state[1]
    zs[0] = policy(state[0], state[1])
    n_kept = steps + 1
    converges = True
    for k in range(1, steps + 1):
        k1 = f(state)
        k2 = f(state + 0.5 * dt * k1)
        k3 = f(state + 0.5 * dt * k2)
        k4 = f(state + dt * k3)
        state = state + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        ts[k], cs[k], cds[k] = k * dt, state[0], state[1]
        zs[k] = policy(state[0], state[1])
        if abs(state[0]) > DIVERGENCE_LIMIT:
            converges = False
            n_kept = k + 1
            break
    return PhaseTrajectory(
        times=ts[:n_kept], c=cs[:n_kept], cd=cds[:n_kept], z=zs[:n_kept],
        converges=converges,
    )


def zmp_from_wrench(w_o, n=(0.0, 0.0, 1.0), d_z=0.0):
    """ZMP of a resultant wrench (force; torque) at the origin.

    z = (n x tau) / (n.f) + d_z f / (n.f); the default plane offset d_z = 0
    places the ZMP on the surface through the origin.
    """
    w_o = np.asarray(w_o, dtype=float).reshape(6)
    n = np.asarray(n, dtype=float).reshape(3)
    f, tau = w_o[:3], w_o[3:]
    load = float(n @ f)
    if load <= 1e-9:
        raise DegenerateLoad(f"normal support load {load:.3e} is nonpositive")
    return np.cross(n, tau) / load + d_z * f / load
