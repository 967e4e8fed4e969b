import numpy as np
import pytest

from balance_kit.errors import DegenerateLoad, InvalidInput
from balance_kit.lipm import (
    LipmState,
    PhaseTrajectory,
    pendulum_constant,
    simulate_phase,
    ssr,
    zmp_from_wrench,
)
from balance_kit.wrench import lipm_equalities, wrench_map, zmp_map

PAPER_W = pendulum_constant(0.78, 9.81)


def test_pendulum_constant_values():
    assert PAPER_W == pytest.approx(3.5463958, abs=1e-6)
    assert pendulum_constant(9.81, 9.81) == 1.0
    assert pendulum_constant(2 * 0.78, 9.81) == pytest.approx(PAPER_W / np.sqrt(2))
    with pytest.raises(InvalidInput):
        pendulum_constant(-1.0)


def test_ssr_reproduces_published_bound():
    interval = ssr(-0.13, 0.13, 0.0, PAPER_W)
    assert interval.hi == pytest.approx(0.4610, abs=1e-4)
    assert abs(interval.hi - 0.4608) <= 5e-4
    assert interval.lo == pytest.approx(-interval.hi)


def test_ssr_edges():
    assert ssr(-0.1, 0.1, 0.1, 2.0).hi == 0.0
    sym = ssr(-0.2, 0.2, 0.0, 3.0)
    assert sym.lo == -sym.hi
    with pytest.raises(InvalidInput):
        ssr(0.2, -0.2, 0.0, 1.0)


def test_simulate_equilibrium_stays_at_origin():
    traj = simulate_phase(LipmState(0.0, 0.0), (-0.13, 0.13), PAPER_W)
    assert traj.converges
    assert np.max(np.abs(traj.c)) < 1e-12
    assert np.max(np.abs(traj.cd)) < 1e-12


def test_simulate_inside_converges_outside_diverges():
    inside = simulate_phase(LipmState(0.0, 0.40), (-0.13, 0.13), PAPER_W)
    assert inside.converges
    assert abs(inside.c[-1]) <= 0.13 + 1e-6
    outside = simulate_phase(LipmState(0.0, 0.50), (-0.13, 0.13), PAPER_W)
    assert not outside.converges


def test_simulated_boundary_matches_ssr():
    """Bisect the converge/diverge boundary; it must sit on the analytic bound."""
    bound = ssr(-0.13, 0.13, 0.0, PAPER_W).hi
    lo, hi = 0.40, 0.50
    while hi - lo > 1e-4:
        mid = 0.5 * (lo + hi)
        if simulate_phase(LipmState(0.0, mid), (-0.13, 0.13), PAPER_W).converges:
            lo = mid
        else:
            hi = mid
    assert abs(0.5 * (lo + hi) - bound) <= 2e-3


def test_simulate_rejects_bad_steps():
    with pytest.raises(InvalidInput):
        simulate_phase(LipmState(0, 0), (-0.1, 0.1), 3.0, dt=0.02)
    with pytest.raises(InvalidInput):
        simulate_phase(LipmState(0, 0), (-0.1, 0.1), 3.0, horizon=0.0)


def test_trajectory_rows_shape():
    traj = simulate_phase(LipmState(0.0, 0.1), (-0.13, 0.13), PAPER_W, horizon=0.5)
    rows = traj.rows()
    assert rows.shape[1] == 4
    assert rows[0, 0] == 0.0
    assert isinstance(traj, PhaseTrajectory)


def test_zmp_pure_vertical_force():
    z = zmp_from_wrench([0, 0, 50.0, 0, 0, 0])
    assert np.allclose(z, 0.0)


def test_zmp_offset_torque():
    mg = 9.81 * 5
    z = zmp_from_wrench([0, 0, mg, 0, -mg * 0.1, 0])
    assert np.allclose(z, [0.1, 0, 0], atol=1e-12)


def test_zmp_transport_residual_oracle():
    """The torque transported to the returned ZMP has no component across n."""
    rng = np.random.default_rng(14)
    n = np.array([0.0, 0.0, 1.0])
    for _ in range(200):
        w = rng.normal(size=6) * 40
        w[2] = abs(w[2]) + 1.0
        z = zmp_from_wrench(w, n)
        tau_z = w[3:] - np.cross(z, w[:3])
        assert np.linalg.norm(np.cross(n, tau_z)) <= 1e-9 * np.linalg.norm(w)


def test_zmp_rejects_degenerate_load():
    with pytest.raises(DegenerateLoad):
        zmp_from_wrench([0, 0, 0, 1, 0, 0])
    with pytest.raises(DegenerateLoad):
        zmp_from_wrench([0, 0, -10.0, 0, 0, 0])


def test_lipm_dynamics_consistency(two_feet):
    """Newton's planar CoM acceleration equals w^2 (c - z) on the equality
    manifold, tying the whole-body relation to the pendulum model."""
    rng = np.random.default_rng(30)
    c_eq, d_eq = lipm_equalities(two_feet)
    a_w = wrench_map(two_feet)
    pinv = np.linalg.pinv(c_eq)
    mg = two_feet.mass * two_feet.gravity
    w_const = pendulum_constant(two_feet.com_height, two_feet.gravity)
    for _ in range(500):
        w0 = rng.normal(size=12) * mg
        w = w0 - pinv @ (c_eq @ w0 - d_eq)
        resultant = a_w @ w
        comdd_newton = resultant[:2] / two_feet.mass  # gravity cancels n.f = mg
        z = zmp_from_wrench(resultant, two_feet.normal)
        comdd_lipm = w_const ** 2 * (two_feet.com[:2] - z[:2])
        assert np.allclose(comdd_newton, comdd_lipm, atol=1e-8)


def test_zmp_map_agrees_with_wrench_zmp(two_feet):
    """Eq.-level check: the linear ZMP map and the nonlinear definition agree
    for wrenches that satisfy the pendulum equalities."""
    rng = np.random.default_rng(31)
    c_eq, d_eq = lipm_equalities(two_feet)
    e_z, f_z = zmp_map(two_feet, 0.0)
    a_w = wrench_map(two_feet)
    pinv = np.linalg.pinv(c_eq)
    mg = two_feet.mass * two_feet.gravity
    for _ in range(200):
        w = rng.normal(size=12) * mg
        w = w - pinv @ (c_eq @ w - d_eq)
        z_linear = e_z @ w + f_z
        z_def = zmp_from_wrench(a_w @ w, two_feet.normal)
        assert np.allclose(z_linear, z_def[:2], atol=1e-8)
