"""2-D convex geometry kernel: hulls, V/H conversion, containment, distances, areas.

All values are immutable after construction and every operation is pure, so
polygons and half-space sets can be shared freely across threads.
"""

import numpy as np

from .errors import DegenerateGeometry, InvalidInput

# Vertices closer than this are considered duplicates and merged before hulling.
MERGE_TOL = 1e-8
# Cross products of consecutive edges may dip this far below zero and still
# count as convex (LP solver noise).
CONVEXITY_TOL = 1e-9


def _as_points(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 and pts.size == 2:
        pts = pts.reshape(1, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidInput(f"expected an array of 2-vectors, got shape {pts.shape}")
    if pts.shape[0] == 0:
        raise InvalidInput("empty point set")
    if not np.all(np.isfinite(pts)):
        raise InvalidInput("points contain non-finite values")
    return pts


def cross2(a, b) -> float:
    """z-component of the cross product of two planar vectors."""
    return float(a[0] * b[1] - a[1] * b[0])


def _freeze(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


class Polygon2:
    """Convex polygon with counter-clockwise vertices.

    Degenerate polygons (single point, segment) are representable but are
    rejected by :func:`to_halfspaces`; callers that need a full-dimensional
    set can use :func:`inflate` (default epsilon 1e-9).
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        pts = _as_points(vertices)
        n = len(pts)
        for i in range(n):
            for j in range(i + 1, n):
                if np.linalg.norm(pts[i] - pts[j]) < MERGE_TOL:
                    raise InvalidInput(f"duplicate vertices {i} and {j}")
        if n >= 3:
            for i in range(n):
                e0 = pts[(i + 1) % n] - pts[i]
                e1 = pts[(i + 2) % n] - pts[(i + 1) % n]
                if cross2(e0, e1) < -CONVEXITY_TOL:
                    raise InvalidInput(f"vertices not convex CCW at index {i}")
        object.__setattr__(self, "vertices", _freeze(pts))

    def __setattr__(self, name, value):
        raise AttributeError("Polygon2 is immutable")

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"Polygon2({self.vertices.tolist()!r})"

    @property
    def area(self):
        return polygon_area(self.vertices)

    def is_degenerate(self):
        return len(self.vertices) < 3 or self.area <= 1e-24


class HalfspaceSet2:
    """Intersection of half-planes {y : G y <= h} with unit row normals."""

    __slots__ = ("G", "h")

    def __init__(self, G, h):
        G = np.asarray(G, dtype=float).reshape(-1, 2)
        h = np.asarray(h, dtype=float).reshape(-1)
        if G.shape[0] != h.shape[0]:
            raise InvalidInput("G and h row counts differ")
        if not (np.all(np.isfinite(G)) and np.all(np.isfinite(h))):
            raise InvalidInput("non-finite half-space data")
        norms = np.linalg.norm(G, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise InvalidInput("rows of G must be unit vectors")
        object.__setattr__(self, "G", _freeze(G))
        object.__setattr__(self, "h", _freeze(h))

    def __setattr__(self, name, value):
        raise AttributeError("HalfspaceSet2 is immutable")

    def __len__(self):
        return len(self.h)

    def __repr__(self):
        return f"HalfspaceSet2(G={self.G.tolist()!r}, h={self.h.tolist()!r})"


def _merge_close(pts):
    """Greedy duplicate merge with tolerance MERGE_TOL."""
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    kept = []
    for idx in order:
        p = pts[idx]
        if any(np.linalg.norm(p - q) < MERGE_TOL for q in kept):
            continue
        kept.append(p)
    return np.array(kept)


def hull2d(points) -> Polygon2:
    """Minimal CCW convex hull of a 2-D point set (Andrew's monotone chain).

    Collinear interior points are removed; duplicates are merged within 1e-8.
    Degenerate inputs yield 1-vertex (point) or 2-vertex (segment) polygons.
    """
    pts = _merge_close(_as_points(points))
    if len(pts) == 1:
        return Polygon2(pts)
    # pts is already lexsorted by _merge_close
    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross2(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    verts = np.array(lower[:-1] + upper[:-1])
    if len(verts) < 2:  # fully collinear input collapses to the two extremes
        verts = np.array([pts[0], pts[-1]])
    # drop residual near-duplicates (can appear when the set is a segment)
    dedup = [verts[0]]
    for v in verts[1:]:
        if np.linalg.norm(v - dedup[-1]) >= MERGE_TOL and np.linalg.norm(v - dedup[0]) >= MERGE_TOL:
            dedup.append(v)
    verts = np.array(dedup)
    # canonical start: lexicographically smallest vertex, CCW order preserved
    start = np.lexsort((verts[:, 1], verts[:, 0]))[0]
    verts = np.roll(verts, -start, axis=0)
    return Polygon2(verts)


def polygon_area(vertices) -> float:
    """Shoelace area of a CCW vertex loop (0 for points and segments)."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def to_halfspaces(p: Polygon2) -> HalfspaceSet2:
    """Convert a full-dimensional polygon to {y : G y <= h}.

    Each CCW edge contributes one row: the outward normal is the edge
    direction rotated by -90 degrees. Exact in 2-D, no double description
    needed.
    """
    if p.is_degenerate():
        raise DegenerateGeometry("polygon has fewer than 3 vertices or zero area")
    v = p.vertices
    edges = np.roll(v, -1, axis=0) - v
    normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
    lengths = np.linalg.norm(normals, axis=1)
    normals /= lengths[:, None]
    offsets = np.sum(normals * v, axis=1)
    return HalfspaceSet2(normals, offsets)


def contains(hs: HalfspaceSet2, y, tol: float = 0.0) -> bool:
    """True iff max(G y - h) <= tol."""
    if tol < 0:
        raise InvalidInput("tol must be nonnegative")
    y = np.asarray(y, dtype=float).reshape(2)
    return bool(np.max(hs.G @ y - hs.h) <= tol)


def _point_segment_distance(p, a, b):
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = np.clip(float((p - a) @ ab) / denom, 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))


def _point_polygon_distance(p, poly: Polygon2):
    v = poly.vertices
    n = len(v)
    inside = True
    for i in range(n):
        if cross2(v[(i + 1) % n] - v[i], p - v[i]) < 0:
            inside = False
            break
    if inside:
        return 0.0
    return min(_point_segment_distance(p, v[i], v[(i + 1) % n]) for i in range(n))


def hausdorff(a: Polygon2, b: Polygon2) -> float:
    """Symmetric Hausdorff distance between two full-dimensional convex polygons.

    The supremum of the distance-to-a-convex-set is attained at a vertex,
    so scanning vertices is exact.
    """
    for poly in (a, b):
        if poly.is_degenerate():
            raise DegenerateGeometry("hausdorff requires full-dimensional polygons")
    d_ab = max(_point_polygon_distance(p, b) for p in a.vertices)
    d_ba = max(_point_polygon_distance(p, a) for p in b.vertices)
    return max(d_ab, d_ba)


def inflated_halfspaces(p: Polygon2, eps: float = 1e-9) -> HalfspaceSet2:
    """Half-space form of a polygon, padding degenerate ones by eps.

    Full-dimensional polygons convert exactly. Points and segments, which
    :func:`to_halfspaces` rejects, are fattened by eps (default 1e-9) in the
    directions they are flat, yielding a valid bounded set.
    """
    if eps <= 0:
        raise InvalidInput("eps must be positive")
    if not p.is_degenerate():
        return to_halfspaces(p)
    v = p.vertices
    if len(v) == 1:
        (x, y), = v
        G = [(1, 0), (-1, 0), (0, 1), (0, -1)]
        h = [x + eps, -x + eps, y + eps, -y + eps]
        return HalfspaceSet2(G, h)
    if len(v) == 2:
        a, b = v
        d = (b - a) / np.linalg.norm(b - a)
        n = np.array([-d[1], d[0]])
        G = [n, -n, d, -d]
        h = [n @ a + eps, -(n @ a) + eps, d @ b + eps, -(d @ a) + eps]
        return HalfspaceSet2(G, h)
    # >= 3 vertices but zero area: fatten the hull's bounding segment
    return inflated_halfspaces(hull2d(v), eps)


def clip_halfspaces(hs: HalfspaceSet2, bound: float | None = None) -> Polygon2:
    """Vertices of a bounded half-space intersection via sequential clipping.

    Starts from a large box (side 2*bound) and clips by every half-plane
    (Sutherland-Hodgman). Intended for sets known to be bounded; the box is
    a numerical safeguard, and a result touching it means the input was
    unbounded at that scale.
    """
    if bound is None:
        bound = 10.0 * (float(np.max(np.abs(hs.h))) + 1.0)
    poly = [
        np.array([-bound, -bound]),
        np.array([bound, -bound]),
        np.array([bound, bound]),
        np.array([-bound, bound]),
    ]
    for g, off in zip(hs.G, hs.h):
        if not poly:
            break
        clipped = []
        n = len(poly)
        for i in range(n):
            cur, nxt = poly[i], poly[(i + 1) % n]
            c_in = g @ cur <= off + 1e-12
            n_in = g @ nxt <= off + 1e-12
            if c_in:
                clipped.append(cur)
            if c_in != n_in:
                d = nxt - cur
                denom = g @ d
                if abs(denom) > 1e-300:
                    t = (off - g @ cur) / denom
                    clipped.append(cur + np.clip(t, 0.0, 1.0) * d)
        poly = clipped
    if not poly:
        raise DegenerateGeometry("half-space intersection is empty")
    return hull2d(np.array(poly))
