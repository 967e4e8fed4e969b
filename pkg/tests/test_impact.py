import numpy as np
import pytest

from balance_kit.errors import InvalidInput, JammedGeneratorWarning, NoValidImpulse
from balance_kit.impact import (
    delta_comd_set,
    friction_cone,
    impulse_set,
    post_impact_set,
    restitution_residuals,
)
from balance_kit.polytope import contains, hull2d, polygon_area, to_halfspaces
from balance_kit.stance import load_stance
from conftest import two_feet_doc, wall_impact_doc


def load_impact(**kwargs):
    doc = two_feet_doc()
    doc["impact"] = wall_impact_doc(**kwargs)
    _, impact = load_stance(doc)
    return impact


def test_cone_four_generators():
    cone = friction_cone(1.0, 4)
    g = cone.generators
    assert g.shape == (3, 4)
    azimuths = np.rad2deg(np.arctan2(g[1], g[0])) % 360
    assert np.allclose(sorted(azimuths), [0, 90, 180, 270], atol=1e-9)
    # mu = 1 means 45-degree elevation
    assert np.allclose(np.linalg.norm(g[:2], axis=0), g[2])


def test_cone_generators_on_coulomb_surface():
    for mu in (0.2, 0.7, 1.4):
        cone = friction_cone(mu, 16)
        g = cone.generators
        assert np.allclose(np.linalg.norm(g, axis=0), 1.0)
        assert np.allclose(np.linalg.norm(g[:2], axis=0), mu * g[2], atol=1e-12)
        assert np.all(g[2] > 0)


def test_cone_inscribed_polygon_area():
    mu, n_mu = 0.24, 16
    cone = friction_cone(mu, n_mu)
    scaled = (cone.generators[:2] / cone.generators[2]).T  # slice at g_z = 1
    area = polygon_area(hull2d(scaled).vertices)
    exact = 0.5 * n_mu * mu * mu * np.sin(2 * np.pi / n_mu)
    assert area == pytest.approx(exact, rel=1e-12)
    assert area >= 0.97 * np.pi * mu * mu


def test_cone_rejects_bad_inputs():
    with pytest.raises(InvalidInput):
        friction_cone(0.0, 8)
    with pytest.raises(InvalidInput):
        friction_cone(0.5, 2)


def test_impulse_set_zero_speed_is_origin():
    s = impulse_set(load_impact(), 0.0)
    assert np.allclose(s.vertices, 0.0)
    assert np.allclose(s.sigmas, 0.0)


def test_impulse_set_fig7_configuration():
    s = impulse_set(load_impact(mu_impact=0.24, cr=(0.0, 0.2), n_mu=16), 0.5)
    assert len(s) == 32
    assert s.dropped_generators == ()
    # every vertex on its generator ray with nonnegative scalar
    for k in range(32):
        g = s.cone.generators[:, s.generator_index[k]]
        assert s.sigmas[k] >= 0
        assert np.allclose(s.vertices[k], g * s.sigmas[k], atol=1e-15)
        # on the cone surface
        v = s.vertices[k]
        assert abs(np.linalg.norm(v[:2]) - 0.24 * v[2]) <= 1e-12 * max(1, np.linalg.norm(v))


def test_impulse_set_restitution_planes():
    spec = load_impact(mu_impact=0.24, cr=(0.0, 0.2), n_mu=16)
    s = impulse_set(spec, 0.5)
    assert np.max(np.abs(restitution_residuals(s, spec))) <= 1e-9


def test_point_mass_momentum_oracle():
    """mu -> 0 limit: the pure-normal impulse is m (1 + c_r) v."""
    doc = two_feet_doc()
    imp = wall_impact_doc(mu_impact=1e-9, cr=(0.3, 0.3), n_mu=4)
    del imp["crb"]
    m = 5.0
    imp["w_inv"] = (np.eye(3) / m).tolist()
    doc["impact"] = imp
    doc["mass"] = m
    _, spec = load_stance(doc)
    v = 0.8
    s = impulse_set(spec, v)
    expected = m * (1 + 0.3) * v
    assert np.allclose(np.linalg.norm(s.vertices, axis=1), expected, rtol=1e-9)
    assert np.allclose(s.vertices[:, 2], expected, rtol=1e-9)


def test_impulse_linearity_in_speed():
    spec = load_impact()
    s1 = impulse_set(spec, 0.4)
    s2 = impulse_set(spec, 0.8)
    assert np.allclose(2 * s1.sigmas, s2.sigmas, rtol=1e-12)
    assert np.allclose(2 * s1.vertices, s2.vertices, rtol=1e-12)


def test_equal_cr_collapses_pairs():
    s = impulse_set(load_impact(cr=(0.15, 0.15)), 0.5)
    assert np.allclose(s.vertices[0::2], s.vertices[1::2], atol=1e-12)


def test_impulse_rejects_receding():
    with pytest.raises(InvalidInput):
        impulse_set(load_impact(), -0.1)


def test_jammed_generators_dropped():
    doc = two_feet_doc()
    imp = wall_impact_doc(n_mu=8, mu_impact=1.2)
    del imp["crb"]
    # stiff coupling along a nearly-horizontal axis: W e_z tilts far from the
    # cone axis and the far-side generators get nonpositive normal gain
    axis = np.array([np.sin(np.deg2rad(85)), 0.0, np.cos(np.deg2rad(85))])
    imp["w_inv"] = (100.0 * np.outer(axis, axis) + 1e-3 * np.eye(3)).tolist()
    doc["impact"] = imp
    _, spec = load_stance(doc)
    gains = spec.e_z @ spec.w_inv @ friction_cone(1.2, 8).generators
    assert np.any(gains <= 1e-9) and np.any(gains > 1e-9)
    with pytest.warns(JammedGeneratorWarning):
        s = impulse_set(spec, 0.5)
    assert len(s.dropped_generators) >= 1
    assert len(s) == 2 * (8 - len(s.dropped_generators))


def test_all_jammed_raises():
    doc = two_feet_doc()
    imp = wall_impact_doc(n_mu=6)
    del imp["crb"]
    imp["w_inv"] = np.zeros((3, 3)).tolist()
    doc["impact"] = imp
    _, spec = load_stance(doc)
    with pytest.warns(JammedGeneratorWarning):
        with pytest.raises(NoValidImpulse):
            impulse_set(spec, 0.5)


def test_delta_comd_rotation_and_mass():
    spec = load_impact()
    s = impulse_set(spec, 0.5)
    deltas = delta_comd_set(s, np.eye(3), 2.0)
    assert np.allclose(deltas, s.vertices / 2.0)
    deltas_rot = delta_comd_set(s, spec.rotation, 2.0)
    assert np.allclose(np.linalg.norm(deltas_rot, axis=1),
                       np.linalg.norm(s.vertices, axis=1) / 2.0)
    with pytest.raises(InvalidInput):
        delta_comd_set(s, 2 * np.eye(3), 1.0)


def test_post_impact_set_single_point():
    ps = post_impact_set((0.1, -0.2), np.zeros((1, 3)))
    assert len(ps.polygon) == 1
    assert np.allclose(ps.polygon.vertices[0], [0.1, -0.2])


def test_post_impact_set_symmetry():
    theta = np.linspace(0, 2 * np.pi, 9)[:-1]
    deltas = np.stack([np.cos(theta), np.sin(theta), np.ones_like(theta)], axis=1)
    ps = post_impact_set((0, 0), deltas)
    v = ps.polygon.vertices
    assert np.allclose(sorted(map(tuple, v)), sorted(map(tuple, -v)), atol=1e-12)


def test_post_impact_set_fig7_bounded_vertices():
    spec = load_impact(mu_impact=0.24, cr=(0.0, 0.2), n_mu=16)
    s = impulse_set(spec, 0.5)
    deltas = delta_comd_set(s, spec.rotation, 39.0)
    ps = post_impact_set(spec.pre_comd, deltas)
    assert 3 <= len(ps.polygon) <= 32
    hs = to_halfspaces(ps.polygon)
    for row in spec.pre_comd + deltas[:, :2]:
        assert contains(hs, row, 1e-9)


def test_post_impact_contains_pre_when_no_approach():
    spec = load_impact()
    s = impulse_set(spec, 0.0)
    deltas = delta_comd_set(s, spec.rotation, 39.0)
    ps = post_impact_set((0.05, 0.02), deltas)
    assert np.allclose(ps.polygon.vertices[0], [0.05, 0.02])
