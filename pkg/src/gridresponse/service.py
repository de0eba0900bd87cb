"""HTTP API exposing the decision engine to the console and to automation.

The service is a thin transport: every response body is exactly the
serialized output of the corresponding library call, so identical inputs
yield identical bytes whether they go through the API or the library.  The
only state is the catalog, loaded once at startup and never mutated.

Endpoints (all under ``/api``):

* ``POST /api/analyze`` — rank countermeasures for an attack graph and
  return recommendations, the attack-defense tree document, and its DOT
  rendering.
* ``POST /api/sensitivity`` — run a seeded weight sweep and return the
  sweep-result document.
* ``GET /api/catalog`` — the loaded catalog document.
* ``GET /api/health`` — liveness probe.

Domain validation failures map to ``400`` with body
``{"error": <name>, "detail": <message>, "element": <optional id>}``;
request bodies larger than the configured cap are rejected with ``413``.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict

from .catalog import Catalog, catalog_to_obj, criterion_from_id, load_default_catalog
from .decision import build_adtree, export_dot, adtree_to_obj, recommend, recommendations_to_obj
from .errors import GridResponseError
from .mcdm import DEFAULT_DELTA, DEFAULT_KAPPA, weights_from_obj
from .model import attack_graph_from_obj
from .sensitivity import SweepConfig, run_sweep, sweep_result_to_obj

DEFAULT_MAX_BODY = 1_048_576  # 1 MiB


class StrategyOptions(BaseModel):
    """Tuning knobs for the fuzzy ranking strategy."""

    model_config = ConfigDict(extra="forbid")

    delta: float = DEFAULT_DELTA
    kappa: float = DEFAULT_KAPPA


class AnalyzeRequest(BaseModel):
    """Attack graph plus weighting; embedded documents are module-validated."""

    model_config = ConfigDict(extra="forbid")

    attack_graph: dict
    weights: dict
    strategy: str = "ivpf-choquet"
    options: StrategyOptions = StrategyOptions()


class SensitivityRequest(BaseModel):
    """Attack graph plus sweep configuration."""

    model_config = ConfigDict(extra="forbid")

    attack_graph: dict
    focus: str
    runs: int = 1000
    seed: int = 0
    strategy: str = "ivpf-choquet"
    options: StrategyOptions = StrategyOptions()


def _error_body(error_name: str, detail: str, element: str | None = None) -> dict:
    body = {"error": error_name, "detail": detail}
    if element is not None:
        body["element"] = element
    return body


def create_app(
    catalog: Catalog | None = None,
    *,
    max_body: int = DEFAULT_MAX_BODY,
    console_dir: str | Path | None = None,
) -> FastAPI:
    """Build the API around an immutable catalog (packaged one by default).

    When ``console_dir`` is given, its contents are served at the web root
    (with ``index.html`` as the directory page) so the operator console and
    the API share one origin; API routes always win over static paths.
    """
    loaded_catalog = catalog if catalog is not None else load_default_catalog()
    catalog_obj = catalog_to_obj(loaded_catalog)
    app = FastAPI(title="gridresponse", docs_url=None, redoc_url=None)

    @app.exception_handler(GridResponseError)
    async def domain_error(request: Request, exc: GridResponseError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content=_error_body(exc.error_name, str(exc), exc.element),
        )

    @app.exception_handler(RequestValidationError)
    async def request_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        first = exc.errors()[0] if exc.errors() else {}
        location = ".".join(str(part) for part in first.get("loc", ()))
        message = first.get("msg", "invalid request")
        return JSONResponse(
            status_code=400,
            content=_error_body("request_error", f"{location}: {message}" if location else message),
        )

    @app.middleware("http")
    async def limit_body(request: Request, call_next):
        declared = request.headers.get("content-length")
        if declared is not None:
            try:
                length = int(declared)
            except ValueError:
                length = None
            if length is not None and length > max_body:
                return JSONResponse(
                    status_code=413,
                    content=_error_body(
                        "request_too_large",
                        f"request body of {length} bytes exceeds the "
                        f"{max_body}-byte limit",
                    ),
                )
        return await call_next(request)

    @app.post("/api/analyze")
    def analyze(request: AnalyzeRequest) -> dict:
        graph = attack_graph_from_obj(request.attack_graph)
        weights = weights_from_obj(request.weights)
        recommendations = recommend(
            graph,
            loaded_catalog,
            weights,
            request.strategy,
            delta=request.options.delta,
            kappa=request.options.kappa,
        )
        tree = build_adtree(graph, recommendations, loaded_catalog)
        return {
            "recommendations": recommendations_to_obj(recommendations),
            "adtree": adtree_to_obj(tree),
            "dot": export_dot(tree),
        }

    @app.post("/api/sensitivity")
    def sensitivity(request: SensitivityRequest) -> dict:
        graph = attack_graph_from_obj(request.attack_graph)
        config = SweepConfig(
            focus=criterion_from_id(request.focus),
            runs=request.runs,
            seed=request.seed,
            strategy=request.strategy,
            delta=request.options.delta,
            kappa=request.options.kappa,
        )
        return sweep_result_to_obj(run_sweep(graph, loaded_catalog, config))

    @app.get("/api/catalog")
    def catalog_document() -> dict:
        return catalog_obj

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    if console_dir is not None:
        app.mount("/", StaticFiles(directory=console_dir, html=True), name="console")

    return app
