"""CoM-velocity balance area and ZMP support area by LP ray-shooting.

The wrench-space feasible set is projected onto the plane through a support
LP per direction. Maximizers build an inner polygon, supporting half-spaces
build an outer one, and refinement always shoots the outward normal of the
inner edge with the largest exact outer-area excess until the area gap
closes or the direction budget is spent.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import StanceInfeasible
from .optim import LpProblem, SolveStatus, solve_lp
from .polytope import HalfspaceSet2, Polygon2, clip_halfspaces, cross2, hull2d, polygon_area
from .stance import StanceSpec
from .wrench import WrenchProblem, assemble, zmp_map

THREADS_ENV = "BALANCE_KIT_THREADS"
VERTEX_TOL = 1e-8  # dedup tolerance before hulling, m/s (or m for ZMP areas)


@dataclass(frozen=True)
class RegionOptions:
    eps_area_rel: float = 1e-3   # stop when gap <= rel * inner area ...
    eps_area_abs: float = 1e-12  # ... plus this floor (degenerate regions)
    max_dirs: int = 64
    plane_height: float = 0.0

    def validate(self):
        if self.eps_area_rel < 0 or self.eps_area_abs < 0:
            raise ValueError("area tolerances must be nonnegative")
        if self.max_dirs < 3:
            raise ValueError("max_dirs must be at least 3")
        return self


@dataclass(frozen=True)
class RegionResult:
    """Inner/outer approximation pair of a projected 2-D set.

    Every inner vertex carries the feasible wrench that achieves it
    (witnesses, aligned with inner.vertices). box_active_rays lists LP
    directions where the wrench box safeguard was binding, which flags an
    unbounded projection.
    """

    inner: Polygon2
    outer: HalfspaceSet2
    gap: float
    directions_used: int
    torque_limits_flag: str
    witnesses: tuple = field(repr=False, default=())
    box_active_rays: tuple = ()

    @property
    def outer_polygon(self):
        return clip_halfspaces(self.outer)


def _thread_count():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


class _Projector:
    """Support-function LPs for one assembled wrench problem."""

    def __init__(self, prob: WrenchProblem):
        self.prob = prob
        self.bounds = [(-prob.box_bound, prob.box_bound)] * prob.n_vars

    def support(self, direction):
        """Maximize direction . (E W + f); returns (point, witness, box_hit)."""
        p = self.prob
        res = solve_lp(LpProblem(
            c=direction @ p.e_map,
            a_in=p.a_in, b_in=p.b_in,
            a_eq=p.c_eq, b_eq=p.d_eq,
            bounds=self.bounds,
        ))
        if res.status is SolveStatus.INFEASIBLE:
            raise StanceInfeasible("no contact wrench satisfies the stance constraints")
        if not res.optimal:
            raise StanceInfeasible(f"support LP failed: {res.status.value} {res.message}")
        w = res.x
        point = p.e_map @ w + p.f_off
        box_hit = bool(np.max(np.abs(w)) >= p.box_bound * (1 - 1e-9))
        return point, w, box_hit


def _dedup_points(points, witnesses):
    kept_p, kept_w = [], []
    for pt, wit in zip(points, witnesses):
        if any(np.linalg.norm(pt - q) < VERTEX_TOL for q in kept_p):
            continue
        kept_p.append(pt)
        kept_w.append(wit)
    return kept_p, kept_w


def _prune_collinear(poly: Polygon2, tol: float = VERTEX_TOL) -> Polygon2:
    """Drop hull vertices within tol of their neighbors' chord.

    Degenerate LP maximizers can land in the interior of a region edge,
    offset from it by solver noise; exact hulling keeps them and would make
    vertex lists depend on which optimizer a tied LP returns.
    """
    verts = [v for v in poly.vertices]
    changed = True
    while changed and len(verts) >= 3:
        changed = False
        for i in range(len(verts)):
            prev_v = verts[i - 1]
            next_v = verts[(i + 1) % len(verts)]
            chord = next_v - prev_v
            nrm = np.linalg.norm(chord)
            if nrm < 1e-15:
                continue
            dist = abs(cross2(chord / nrm, verts[i] - prev_v))
            if dist < tol:
                verts.pop(i)
                changed = True
                break
    return Polygon2(np.array(verts)) if len(verts) != len(poly.vertices) else poly


def _edge_excess(outer_poly_vertices, v0, v1):
    """Exact area of the current outer polygon beyond the chord v0 -> v1."""
    u = np.array([v1[1] - v0[1], v0[0] - v1[0]])  # outward normal of a CCW edge
    nrm = np.linalg.norm(u)
    if nrm < 1e-15:
        return 0.0, u
    u = u / nrm
    off = u @ v0
    clipped = []
    pts = outer_poly_vertices
    n = len(pts)
    for i in range(n):
        cur, nxt = pts[i], pts[(i + 1) % n]
        c_out = u @ cur >= off - 1e-15
        n_out = u @ nxt >= off - 1e-15
        if c_out:
            clipped.append(cur)
        if c_out != n_out:
            d = nxt - cur
            t = (off - u @ cur) / (u @ d)
            clipped.append(cur + t * d)
    return polygon_area(np.array(clipped)) if len(clipped) >= 3 else 0.0, u


def _project(prob: WrenchProblem, opts: RegionOptions, torque_flag: str) -> RegionResult:
    opts.validate()
    projector = _Projector(prob)
    angles = np.deg2rad([90.0, 210.0, 330.0])
    dirs = [np.array([np.cos(a), np.sin(a)]) for a in angles]

    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(dirs))) as pool:
            first = list(pool.map(projector.support, dirs))
    else:
        first = [projector.support(d) for d in dirs]

    points = [r[0] for r in first]
    witnesses = [r[1] for r in first]
    box_rays = [i for i, r in enumerate(first) if r[2]]
    halfspaces = [(d, float(d @ p)) for d, p in zip(dirs, points)]
    used = len(dirs)
    converged_edges: set = set()

    def current_sets():
        pts, wits = _dedup_points(points, witnesses)
        inner = _prune_collinear(hull2d(np.array(pts)))
        # re-align witnesses with the hull's vertex order
        wit_for = []
        for v in inner.vertices:
            idx = int(np.argmin([np.linalg.norm(v - q) for q in pts]))
            wit_for.append(wits[idx])
        G = np.array([hs[0] for hs in halfspaces])
        h = np.array([hs[1] for hs in halfspaces])
        outer = HalfspaceSet2(G, h)
        return inner, wit_for, outer

    while True:
        inner, wit_for, outer = current_sets()
        outer_poly = clip_halfspaces(outer)
        gap = polygon_area(outer_poly.vertices) - inner.area
        eps = opts.eps_area_abs + opts.eps_area_rel * inner.area
        if gap <= eps or used >= opts.max_dirs:
            break
        # pick the inner edge with the largest exact outer-area excess
        verts = inner.vertices
        n_v = len(verts)
        best = None
        if n_v >= 2:
            for i in range(n_v):
                v0, v1 = verts[i], verts[(i + 1) % n_v]
                if n_v == 2 and i == 1:
                    v0, v1 = verts[1], verts[0]
                key = (round(v0[0], 12), round(v0[1], 12), round(v1[0], 12), round(v1[1], 12))
                if key in converged_edges:
                    continue
                excess, normal = _edge_excess(outer_poly.vertices, v0, v1)
                if best is None or excess > best[0]:
                    best = (excess, normal, key)
        if best is None or best[0] <= 0.0:
            break
        _, direction, key = best
        point, wit, box_hit = projector.support(direction)
        used += 1
        if box_hit:
            box_rays.append(used - 1)
        halfspaces.append((direction, float(direction @ point)))
        if any(np.linalg.norm(point - q) < VERTEX_TOL for q in points):
            # degenerate LP face: no new vertex along this edge
            converged_edges.add(key)
        else:
            points.append(point)
            witnesses.append(wit)

    inner, wit_for, outer = current_sets()
    outer_poly = clip_halfspaces(outer)
    gap = max(polygon_area(outer_poly.vertices) - inner.area, 0.0)
    return RegionResult(
        inner=inner,
        outer=outer,
        gap=gap,
        directions_used=used,
        torque_limits_flag=torque_flag,
        witnesses=tuple(wit_for),
        box_active_rays=tuple(box_rays),
    )


def compute_region(stance: StanceSpec, opts: RegionOptions | None = None) -> RegionResult:
    """CoM-velocity balance area of a stance (m/s on the plane)."""
    opts = opts or RegionOptions()
    prob = assemble(stance, plane_height=opts.plane_height)
    flag = "included" if prob.torque_limits_included else "omitted"
    return _project(prob, opts, flag)


def zmp_support_area(stance: StanceSpec, opts: RegionOptions | None = None) -> RegionResult:
    """Feasible ZMP area on the projection plane (meters, stance coordinates)."""
    opts = opts or RegionOptions()
    prob = assemble(stance, plane_height=opts.plane_height)
    e_z, f_z = zmp_map(stance.centered(), opts.plane_height)
    # the centered frame shares the stance's planar origin shift: map back
    f_world = f_z + stance.com[:2] - stance.centered().com[:2]
    zmp_prob = WrenchProblem(
        a_in=prob.a_in, b_in=prob.b_in, c_eq=prob.c_eq, d_eq=prob.d_eq,
        e_map=e_z, f_off=f_world, row_labels=prob.row_labels,
        box_bound=prob.box_bound,
        torque_limits_included=prob.torque_limits_included,
    )
    flag = "included" if prob.torque_limits_included else "omitted"
    return _project(zmp_prob, opts, flag)
