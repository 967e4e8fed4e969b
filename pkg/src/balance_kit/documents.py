"""Result documents shared by the CLI and the HTTP service.

Serialization is canonical: fixed field order, floats at 12 significant
digits, compact separators. Identical inputs therefore produce byte-identical
documents, and the service and CLI emit the same `data` section for the same
request.
"""

import json

import numpy as np

from . import __version__
from .errors import InvalidInput
from .impact import delta_comd_set, impulse_set, post_impact_set, restitution_residuals
from .lipm import LipmState, pendulum_constant, simulate_phase, ssr
from .maxvel import MaxvelOptions, max_contact_velocity
from .region import RegionOptions, compute_region, zmp_support_area
from .stance import ImpactSpec, StanceSpec


def format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise InvalidInput("non-finite value in output document")
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".12g")


def canonical_dumps(value) -> str:
    """JSON with deterministic float formatting; dict order is insertion order."""
    out = []
    _write(value, out)
    return "".join(out)


def _write(value, out):
    if isinstance(value, dict):
        out.append("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _write(v, out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, v in enumerate(value):
            if i:
                out.append(",")
            _write(v, out)
        out.append("]")
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        out.append(format_float(float(value)))
    elif value is None:
        out.append("null")
    elif isinstance(value, str):
        out.append(json.dumps(value))
    elif isinstance(value, np.ndarray):
        _write(value.tolist(), out)
    else:
        raise InvalidInput(f"cannot serialize {type(value).__name__}")


def approach_speed(impact: ImpactSpec) -> float:
    """Normal approach speed of the reference contact velocity."""
    speed = float(np.linalg.norm(impact.v_ref))
    if speed <= 0:
        raise InvalidInput("v_ref must be nonzero")
    gain = float(-(impact.e_z @ impact.rotation.T @ impact.v_ref))
    return gain


def _region_data(result):
    return {
        "inner_vertices": result.inner.vertices.tolist(),
        "outer_halfspaces": {"G": result.outer.G.tolist(), "h": result.outer.h.tolist()},
        "gap": float(result.gap),
        "area": float(result.inner.area),
        "directions_used": int(result.directions_used),
        "flags": {
            "torque_limits": result.torque_limits_flag,
            "box_bound_active_rays": list(result.box_active_rays),
        },
    }


def run_region(stance: StanceSpec, opts: RegionOptions):
    return _region_data(compute_region(stance, opts))


def run_zmp_area(stance: StanceSpec, opts: RegionOptions):
    return _region_data(zmp_support_area(stance, opts))


def run_impulse(stance: StanceSpec, impact: ImpactSpec | None):
    if impact is None:
        raise InvalidInput("stance document has no impact section")
    from .errors import InvalidImpactDirection

    v_n = approach_speed(impact)
    if v_n <= 1e-9:
        raise InvalidImpactDirection(
            "reference velocity has no positive approach component along the impact normal")
    s = impulse_set(impact, v_n)
    deltas = delta_comd_set(s, impact.rotation, stance.mass)
    residuals = restitution_residuals(s, impact)
    post = post_impact_set(impact.pre_comd, deltas)
    return {
        "v_n_pre": float(v_n),
        "vertices": [
            {
                "generator": int(s.generator_index[k]),
                "sigma": float(s.sigmas[k]),
                "impulse": s.vertices[k].tolist(),
                "delta_comd": deltas[k].tolist(),
                "restitution_residual": float(residuals[k]),
            }
            for k in range(len(s))
        ],
        "dropped_generators": list(s.dropped_generators),
        "post_impact_vertices": post.polygon.vertices.tolist(),
    }


def run_maxvel(stance: StanceSpec, impact: ImpactSpec | None, opts: MaxvelOptions):
    if impact is None:
        raise InvalidInput("stance document has no impact section")
    res = max_contact_velocity(stance, impact, opts)
    flags = {
        "joint_velocity_rows": res.diagnostics["joint_velocity_rows"],
        "joint_torque_rows": res.diagnostics["joint_torque_rows"],
        "binding_families": list(res.diagnostics["binding_families"]),
        "dropped_generators": list(res.diagnostics["dropped_generators"]),
    }
    return {
        "speed": float(res.s_star),
        "v_star": res.v_star.tolist(),
        "sigma": res.sigma_star.tolist(),
        "post_impact_vertices": res.post_impact.polygon.vertices.tolist(),
        "active_vertices": list(res.active_vertices),
        "flags": flags,
    }


def run_phase(stance: StanceSpec, zmp_lo: float, zmp_hi: float, x0=(0.0, 0.0),
              dt: float = 1e-3, horizon: float = 10.0):
    w = pendulum_constant(stance.com_height, stance.gravity)
    interval = ssr(zmp_lo, zmp_hi, float(x0[0]), w)
    traj = simulate_phase(LipmState(float(x0[0]), float(x0[1])), (zmp_lo, zmp_hi),
                          w, dt=dt, horizon=horizon)
    return {
        "pendulum_constant": float(w),
        "ssr": {"lo": float(interval.lo), "hi": float(interval.hi)},
        "classification": "converges" if traj.converges else "diverges",
        "trajectory": traj.rows().tolist(),
    }


def document(command: str, options: dict, data: dict) -> dict:
    return {
        "meta": {"version": __version__, "command": command, "options": options},
        "data": data,
    }


def phase_csv(data: dict) -> str:
    lines = ["t,c_x,cd_x,z_x"]
    for row in data["trajectory"]:
        lines.append(",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def polygon_csv(data: dict) -> str:
    lines = ["x,y"]
    for row in data["inner_vertices"]:
        lines.append(",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"
