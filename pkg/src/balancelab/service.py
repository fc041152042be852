"""Minimal HTTP facade over the Monte Carlo engine.

Stateless and synchronous: a POST body carrying the simulation parameters
(seed included) deterministically maps to its summary, so the companion UI
never computes statistics itself. The replicate count is capped to bound
request latency.
"""

import uuid

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .config import parse_run_config
from .datagen import CONFIG_RANGES
from .errors import ConfigError
from .procedures import run_grid, run_simulation, summary_dict

__all__ = ["create_app", "DEFAULT_REPLICATE_CAP"]

DEFAULT_REPLICATE_CAP = 100_000


def _field_error(status: int, field: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": {"field": field, "message": message}})


def create_app(workers: int = 1, replicate_cap: int = DEFAULT_REPLICATE_CAP,
               cors: bool = False) -> FastAPI:
    app = FastAPI(title="balancelab service")
    if cors:
        app.add_middleware(
            CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
        )

    @app.get("/health")
    def health() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.get("/ranges")
    def ranges() -> dict:
        # the UI mirrors these bounds so client and server validation agree
        return {"fields": CONFIG_RANGES, "replicate_cap": replicate_cap}

    @app.post("/simulate")
    async def simulate(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _field_error(400, "body", "request body must be a JSON object")
        if not isinstance(body, dict):
            return _field_error(400, "body", "request body must be a JSON object")
        request_id = str(body.pop("request_id", "") or "")
        body.pop("workers", None)  # request bodies cannot raise server parallelism
        try:
            run = parse_run_config(body)
        except ConfigError as exc:
            return _field_error(400, exc.field, exc.message)

        n_points = len(run.grid_values) if run.grid_axis else 1
        total = run.config.n_replicates * n_points
        if total > replicate_cap:
            return _field_error(
                422, "n_replicates",
                f"total replicates {total} exceed the cap of {replicate_cap}",
            )
        try:
            if run.grid_axis:
                summaries = run_grid(run.config, run.grid_axis, run.grid_values,
                                     workers=workers)
                result = [summary_dict(s, include_timing=True) for s in summaries]
                wall_time = sum(s.wall_time_s for s in summaries)
            else:
                summary = run_simulation(run.config, workers=workers)
                result = summary_dict(summary, include_timing=True)
                wall_time = summary.wall_time_s
        except Exception:
            # never leak internals; the opaque id is all a client sees
            return JSONResponse(
                status_code=500,
                content={"error": {"field": None,
                                   "message": f"internal error {uuid.uuid4()}"}},
            )
        return {"request_id": request_id, "wall_time_s": wall_time, "result": result}

    return app
