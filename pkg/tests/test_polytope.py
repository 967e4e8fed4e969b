import numpy as np
import pytest

from balance_kit.errors import DegenerateGeometry, InvalidInput
from balance_kit.polytope import (
    HalfspaceSet2,
    Polygon2,
    clip_halfspaces,
    contains,
    hausdorff,
    hull2d,
    inflated_halfspaces,
    polygon_area,
    to_halfspaces,
)

UNIT_SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def test_hull_removes_interior_point():
    poly = hull2d([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)])
    assert len(poly) == 4
    assert sorted(map(tuple, poly.vertices)) == sorted(UNIT_SQUARE)


def test_hull_single_point():
    poly = hull2d([(0.0, 0.0)])
    assert len(poly) == 1
    assert poly.is_degenerate()


def test_hull_collinear_collapses_to_segment():
    poly = hull2d([(0, 0), (1, 1), (2, 2), (3, 3)])
    assert len(poly) == 2
    assert np.allclose(poly.vertices, [(0, 0), (3, 3)])


def test_hull_random_disk_contains_inputs():
    rng = np.random.default_rng(7)
    r = np.sqrt(rng.uniform(0, 1, 1000))
    t = rng.uniform(0, 2 * np.pi, 1000)
    pts = np.stack([r * np.cos(t), r * np.sin(t)], axis=1)
    poly = hull2d(pts)
    assert poly.area <= np.pi
    hs = to_halfspaces(poly)
    for p in pts:
        assert contains(hs, p, 1e-9)


def test_hull_idempotent():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(200, 2))
    h1 = hull2d(pts)
    h2 = hull2d(h1.vertices)
    assert np.allclose(h1.vertices, h2.vertices)


def test_hull_empty_input_rejected():
    with pytest.raises(InvalidInput):
        hull2d([])


def test_polygon_validation():
    with pytest.raises(InvalidInput):
        Polygon2([(0, 0), (1, 0), (1, 0 + 1e-9)])  # duplicates
    with pytest.raises(InvalidInput):
        Polygon2([(0, 0), (1, 1), (1, 0), (0, 1)])  # not convex CCW


def test_halfspaces_unit_square():
    hs = to_halfspaces(Polygon2(UNIT_SQUARE))
    assert len(hs) == 4
    rows = sorted(map(tuple, np.column_stack([hs.G, hs.h])))
    expected = sorted([(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 1.0, 1.0), (1.0, 0.0, 1.0)])
    assert np.allclose(rows, expected)


def test_halfspaces_triangle_interior_point():
    hs = to_halfspaces(Polygon2([(0, 0), (1, 0), (0, 1)]))
    assert len(hs) == 3
    assert np.all(hs.G @ np.array([0.2, 0.2]) <= hs.h)


def test_halfspaces_vertices_tight_on_two_rows():
    rng = np.random.default_rng(11)
    poly = hull2d(rng.normal(size=(50, 2)))
    hs = to_halfspaces(poly)
    for v in poly.vertices:
        resid = hs.G @ v - hs.h
        assert np.max(resid) <= 1e-9
        assert np.sum(np.abs(resid) <= 1e-9) == 2


def test_halfspaces_degenerate_rejected():
    with pytest.raises(DegenerateGeometry):
        to_halfspaces(Polygon2([(0, 0), (1, 0)]))


def test_contains_tolerance_band():
    hs = to_halfspaces(Polygon2(UNIT_SQUARE))
    assert contains(hs, (0.5, 0.5), 0.0)
    assert contains(hs, (1 + 1e-7, 0.5), 1e-6)
    assert not contains(hs, (2, 0), 0.0)
    with pytest.raises(InvalidInput):
        contains(hs, (0, 0), -1.0)


def test_hausdorff_identity_and_scaling():
    sq = Polygon2(UNIT_SQUARE)
    assert hausdorff(sq, sq) == 0.0
    big = Polygon2([(0, 0), (2, 0), (2, 2), (0, 2)])
    assert hausdorff(sq, big) == pytest.approx(np.sqrt(2.0), abs=1e-12)


def test_hausdorff_perturbation_bound():
    rng = np.random.default_rng(5)
    poly = hull2d(rng.normal(size=(40, 2)))
    wiggled = Polygon2(poly.vertices + rng.uniform(-1e-6, 1e-6, poly.vertices.shape))
    assert hausdorff(poly, wiggled) <= 1e-5


def test_hausdorff_rejects_degenerate():
    with pytest.raises(DegenerateGeometry):
        hausdorff(Polygon2([(0, 0)]), Polygon2(UNIT_SQUARE))


def test_roundtrip_via_clipping():
    rng = np.random.default_rng(13)
    for _ in range(20):
        poly = hull2d(rng.normal(size=(30, 2)) * rng.uniform(0.1, 5))
        back = clip_halfspaces(to_halfspaces(poly))
        assert hausdorff(poly, back) <= 1e-8


def test_vertices_satisfy_own_halfspaces():
    rng = np.random.default_rng(17)
    poly = hull2d(rng.normal(size=(25, 2)))
    hs = to_halfspaces(poly)
    for v in poly.vertices:
        assert contains(hs, v, 1e-9)


def test_polygon_area_square():
    assert polygon_area(UNIT_SQUARE) == pytest.approx(1.0)
    assert polygon_area([(0, 0), (1, 1)]) == 0.0


def test_inflated_halfspaces_for_degenerate_sets():
    seg = Polygon2([(0, 0), (1, 0)])
    hs = inflated_halfspaces(seg, 1e-9)
    assert contains(hs, (0.5, 0), 1e-12)
    assert not contains(hs, (0.5, 1e-6), 0.0)
    pt = Polygon2([(0.3, -0.2)])
    hs_pt = inflated_halfspaces(pt, 1e-9)
    assert contains(hs_pt, (0.3, -0.2), 0.0)
    assert not contains(hs_pt, (0.31, -0.2), 0.0)
    square = Polygon2(UNIT_SQUARE)
    assert np.allclose(inflated_halfspaces(square).h, to_halfspaces(square).h)


def test_clip_empty_intersection():
    hs = HalfspaceSet2([[1, 0], [-1, 0]], [-1.0, -1.0])  # x <= -1 and x >= 1
    with pytest.raises(DegenerateGeometry):
        clip_halfspaces(hs)


def test_immutability():
    poly = Polygon2(UNIT_SQUARE)
    with pytest.raises((ValueError, AttributeError)):
        poly.vertices[0, 0] = 5.0
    with pytest.raises(AttributeError):
        poly.vertices = None
