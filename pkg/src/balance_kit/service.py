"""Stateless HTTP facade over the region/impulse/maxvel computations.

Responses carry the same canonical `data` documents as the CLI, plus a
`warnings` list. No request mutates server state; a bounded worker pool caps
parallel solver use and requests time out at 30 seconds.
"""

import asyncio
import json
import os
import warnings as warnings_mod
from concurrent.futures import ThreadPoolExecutor

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .documents import canonical_dumps, document, run_impulse, run_maxvel, run_region, run_zmp_area
from .errors import (
    BalanceKitError,
    InvalidInput,
    NoValidImpulse,
    SchemaError,
    StanceInfeasible,
    ValidationError,
)
from .maxvel import MaxvelOptions
from .region import RegionOptions
from .stance import load_stance

MAX_BODY_BYTES = 1 << 20
REQUEST_TIMEOUT_S = 30.0
MAX_DIRS_CAP = 128  # server-side cost bound on region refinement

_OPTION_KEYS = {"eps_area", "max_dirs", "plane_height", "full_qdot", "n_mu"}


def _json_response(payload: dict, status_code: int = 200) -> Response:
    return Response(content=canonical_dumps(payload) + "\n",
                    media_type="application/json", status_code=status_code)


def _error(status, code, stage, message, field_path=None):
    body = {"code": code, "stage": stage, "message": str(message)}
    if field_path is not None:
        body["field_path"] = field_path
    return _json_response(body, status_code=status)


def _split_options(body):
    if not isinstance(body, dict):
        raise SchemaError("request body must be a JSON object")
    raw_opts = body.pop("options", None) or {}
    if not isinstance(raw_opts, dict):
        raise SchemaError("options: expected an object")
    unknown = set(raw_opts) - _OPTION_KEYS
    if unknown:
        raise SchemaError(f"options: unknown fields {sorted(unknown)}")
    return body, raw_opts


def _region_options(raw):
    max_dirs = min(int(raw.get("max_dirs", 64)), MAX_DIRS_CAP)
    return RegionOptions(
        eps_area_rel=float(raw.get("eps_area", 1e-3)),
        max_dirs=max_dirs,
        plane_height=float(raw.get("plane_height", 0.0)),
    )


def _compute(command, body):
    body, raw_opts = _split_options(body)
    stance, impact = load_stance(body)
    if command in ("region", "zmp-area"):
        opts = _region_options(raw_opts)
        options = {"eps_area": opts.eps_area_rel, "max_dirs": opts.max_dirs,
                   "plane_height": opts.plane_height}
        runner = run_region if command == "region" else run_zmp_area
        data = runner(stance, opts)
    elif command == "impulse":
        if impact is not None and "n_mu" in raw_opts:
            from dataclasses import replace

            impact = replace(impact, n_mu=int(raw_opts["n_mu"])).validate()
        options = {"n_mu": impact.n_mu if impact else None}
        data = run_impulse(stance, impact)
    else:  # maxvel
        opts = _region_options(raw_opts)
        full_qdot = bool(raw_opts.get("full_qdot", False))
        if impact is not None and "n_mu" in raw_opts:
            from dataclasses import replace

            impact = replace(impact, n_mu=int(raw_opts["n_mu"])).validate()
        options = {"eps_area": opts.eps_area_rel, "max_dirs": opts.max_dirs,
                   "plane_height": opts.plane_height,
                   "n_mu": impact.n_mu if impact else None,
                   "full_qdot": full_qdot}
        data = run_maxvel(stance, impact,
                          MaxvelOptions(region_options=opts, full_qdot=full_qdot))
    return options, data


def create_app(cors_origin: str | None = None, workers: int | None = None) -> FastAPI:
    app = FastAPI(title="balance-kit", version=__version__)
    origin = cors_origin or os.environ.get("BALANCE_KIT_UI_ORIGIN", "*")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    pool_size = workers or int(os.environ.get("BALANCE_KIT_WORKERS", "4"))
    pool = ThreadPoolExecutor(max_workers=max(1, pool_size))

    async def handle(command: str, request: Request) -> Response:
        raw = await request.body()
        if len(raw) > MAX_BODY_BYTES:
            return _error(413, "body_too_large", "ingest",
                          f"request body exceeds {MAX_BODY_BYTES} bytes")
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            return _error(400, "malformed_json", "ingest", exc)

        def work():
            with warnings_mod.catch_warnings(record=True) as caught:
                warnings_mod.simplefilter("always")
                options, data = _compute(command, body)
                notes = [str(w.message) for w in caught]
            return options, data, notes

        loop = asyncio.get_running_loop()
        try:
            options, data, notes = await asyncio.wait_for(
                loop.run_in_executor(pool, work), REQUEST_TIMEOUT_S)
        except asyncio.TimeoutError:
            return _error(504, "timeout", "compute",
                          f"computation exceeded {REQUEST_TIMEOUT_S} s")
        except ValidationError as exc:
            return _error(400, "validation_error", "validate", exc,
                          field_path=exc.field_path)
        except (SchemaError, InvalidInput) as exc:
            return _error(400, "invalid_input", "validate", exc)
        except (StanceInfeasible, NoValidImpulse) as exc:
            return _error(422, "infeasible", "project", exc)
        except BalanceKitError as exc:
            return _error(500, "solver_failure", "solve", exc)
        payload = document(command, options, data)
        payload["warnings"] = notes
        return _json_response(payload)

    @app.post("/api/region")
    async def region(request: Request):
        return await handle("region", request)

    @app.post("/api/zmp-area")
    async def zmp_area(request: Request):
        return await handle("zmp-area", request)

    @app.post("/api/impulse")
    async def impulse(request: Request):
        return await handle("impulse", request)

    @app.post("/api/maxvel")
    async def maxvel(request: Request):
        return await handle("maxvel", request)

    @app.get("/api/health")
    async def health():
        return _json_response({"status": "ok", "version": __version__})

    return app


app = create_app()


def main():  # pragma: no cover - thin uvicorn wrapper
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=int(os.environ.get("PORT", "8321")))


if __name__ == "__main__":  # pragma: no cover
    main()
