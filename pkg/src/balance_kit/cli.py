"""Batch front-end: load stance files, run the computations, emit documents.

Exit codes: 0 success, 2 validation error, 3 infeasible stance, 4 solver
failure. Stage-labeled diagnostics (including timings) go to stderr; output
documents are deterministic byte-for-byte for identical inputs and options.
"""

import argparse
import json
import sys
import time

from .documents import (
    canonical_dumps,
    document,
    phase_csv,
    polygon_csv,
    run_impulse,
    run_maxvel,
    run_phase,
    run_region,
    run_zmp_area,
)
from .errors import (
    BalanceKitError,
    InvalidInput,
    NoValidImpulse,
    SchemaError,
    SolverFailure,
    StanceInfeasible,
    ValidationError,
)
from .maxvel import MaxvelOptions
from .region import RegionOptions
from .stance import load_stance

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_SOLVER = 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="balance-kit",
        description="Impact-aware balance criteria for legged-robot stances",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in (
        ("region", "CoM-velocity balance area"),
        ("zmp-area", "feasible ZMP support area"),
        ("impulse", "candidate post-impact impulse set"),
        ("maxvel", "maximum balance-aware contact velocity"),
        ("phase", "LIPM phase-portrait simulation"),
    ):
        p = sub.add_parser(name, help=desc)
        p.add_argument("--in", dest="input", required=True, help="stance JSON file")
        p.add_argument("--out", dest="output", help="output document path (default stdout)")
        p.add_argument("--csv", help="also write plot-ready CSV here")
        if name in ("region", "zmp-area", "maxvel"):
            p.add_argument("--eps-area", type=float, default=1e-3,
                           help="relative area-gap stop (default 1e-3)")
            p.add_argument("--max-dirs", type=int, default=64)
            p.add_argument("--plane-height", type=float, default=0.0)
        if name in ("impulse", "maxvel"):
            p.add_argument("--nmu", type=int, help="override cone discretization count")
        if name == "maxvel":
            p.add_argument("--full-qdot", action="store_true",
                           help="optimize the joint velocity vector instead of a scalar speed")
        if name == "phase":
            p.add_argument("--zmp-lo", type=float, default=-0.13)
            p.add_argument("--zmp-hi", type=float, default=0.13)
            p.add_argument("--x0", type=float, nargs=2, default=(0.0, 0.0),
                           metavar=("C_X", "CD_X"))
            p.add_argument("--dt", type=float, default=1e-3)
            p.add_argument("--horizon", type=float, default=10.0)
    return parser


def _region_options(args):
    return RegionOptions(
        eps_area_rel=args.eps_area,
        max_dirs=args.max_dirs,
        plane_height=args.plane_height,
    )


def _override_nmu(impact, nmu):
    if impact is None or nmu is None:
        return impact
    from dataclasses import replace

    return replace(impact, n_mu=int(nmu)).validate()


def _run(args):
    with open(args.input) as fh:
        raw = json.load(fh)
    stance, impact = load_stance(raw)
    options = {}
    t0 = time.perf_counter()
    if args.command == "region":
        options = {"eps_area": args.eps_area, "max_dirs": args.max_dirs,
                   "plane_height": args.plane_height}
        data = run_region(stance, _region_options(args))
    elif args.command == "zmp-area":
        options = {"eps_area": args.eps_area, "max_dirs": args.max_dirs,
                   "plane_height": args.plane_height}
        data = run_zmp_area(stance, _region_options(args))
    elif args.command == "impulse":
        impact = _override_nmu(impact, args.nmu)
        options = {"n_mu": impact.n_mu if impact else None}
        data = run_impulse(stance, impact)
    elif args.command == "maxvel":
        impact = _override_nmu(impact, args.nmu)
        options = {"eps_area": args.eps_area, "max_dirs": args.max_dirs,
                   "plane_height": args.plane_height,
                   "n_mu": impact.n_mu if impact else None,
                   "full_qdot": bool(args.full_qdot)}
        data = run_maxvel(stance, impact, MaxvelOptions(
            region_options=_region_options(args), full_qdot=args.full_qdot))
    elif args.command == "phase":
        options = {"zmp_lo": args.zmp_lo, "zmp_hi": args.zmp_hi,
                   "x0": list(args.x0), "dt": args.dt, "horizon": args.horizon}
        data = run_phase(stance, args.zmp_lo, args.zmp_hi, args.x0,
                         dt=args.dt, horizon=args.horizon)
    else:  # pragma: no cover - argparse guards
        raise InvalidInput(f"unknown command {args.command}")
    elapsed = time.perf_counter() - t0
    print(f"[{args.command}] computed in {elapsed:.3f} s", file=sys.stderr)

    text = canonical_dumps(document(args.command, options, data)) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        if args.command == "phase":
            csv_text = phase_csv(data)
        elif "inner_vertices" in data:
            csv_text = polygon_csv(data)
        else:
            raise InvalidInput(f"--csv is not supported for {args.command}")
        with open(args.csv, "w") as fh:
            fh.write(csv_text)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (SchemaError, ValidationError, InvalidInput, json.JSONDecodeError,
            OSError) as exc:
        print(f"[{args.command}:validation] {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (StanceInfeasible, NoValidImpulse) as exc:
        print(f"[{args.command}:infeasible] {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (SolverFailure, BalanceKitError) as exc:
        print(f"[{args.command}:solver] {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
