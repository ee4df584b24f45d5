"""HTTP service exposing the pipeline for long-running or multi-client use.

Each endpoint wraps one pipeline operation with pydantic request/response
models; nothing is written to disk.  Error mapping: invalid configuration
422, violated coefficient hypotheses 400, solver non-convergence 409.

Run with:  uvicorn fracnodal.service:app
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import pipeline
from .config import RunConfig
from .degree import Rectangle, certify_minimizer
from .errors import (
    ConfigError,
    HypothesisViolationError,
    NonConvergenceError,
    ParameterError,
)
from .solver import solve_ground, solve_nodal


class ConfigPayload(BaseModel):
    """Request-side mirror of the run configuration."""

    alpha: float = 0.4
    dim: int = 1
    radius: float = 10.0
    n: int = 801
    model: str = "odd_power"
    m: float = 4.0
    potential: str = "constant"
    projection_tol: float = 1e-10
    solver_tol: float = 1e-6
    beta_config: float = 1e-6
    max_iter: int = 3000
    seed_center_minus: float = -1.0
    seed_center_plus: float = 1.0
    seed_width: float = 0.5
    seed_amplitude: float = 1.0
    n_boundary: int = 256
    window_measure: float = 2.0
    quad_order: int = 16

    def to_config(self) -> RunConfig:
        return RunConfig(**self.model_dump()).validate()


class AssembleResponse(BaseModel):
    n: int
    spacing: float
    radius: float
    alpha: float
    symmetry_residual: float
    rowsum_max: float
    constant_seminorm: float
    exterior_weight_min: float
    exterior_weight_max: float
    gaussian_seminorm_sq: float
    gaussian_norm_sq: float


class ValidateResponse(BaseModel):
    conditions: dict
    route_claimed: str
    route_observed: str


class ScalesModel(BaseModel):
    t_plus: float
    s_minus: float
    residual: float
    iterations: int
    converged: bool


class SolveResponse(BaseModel):
    energy: float
    residual: float
    iterations: int
    sign_change: bool
    converged: bool
    message: str
    scales: ScalesModel | None = None
    degree_certificate: int | None = None
    x: list[float]
    u: list[float]
    energy_trace: list[float]


class MultistartResponse(BaseModel):
    n_seeds: int
    n_distinct: int
    energies: list[float]
    runs: list[dict]


class DegreeRequest(BaseModel):
    config: ConfigPayload = Field(default_factory=ConfigPayload)
    u: list[float]
    t_lo: float = 0.5
    t_hi: float = 1.5
    s_lo: float = 0.5
    s_hi: float = 1.5


class DegreeResponse(BaseModel):
    degree_certificate: int


def _config_or_422(payload: ConfigPayload) -> RunConfig:
    try:
        return payload.to_config()
    except (ConfigError, ParameterError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def create_app() -> FastAPI:
    app = FastAPI(title="fracnodal", description=__doc__)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/assemble", response_model=AssembleResponse)
    def assemble(payload: ConfigPayload) -> AssembleResponse:
        config = _config_or_422(payload)
        try:
            return AssembleResponse(**{
                k: v for k, v in pipeline.run_assemble(config).items()
                if k in AssembleResponse.model_fields
            })
        except HypothesisViolationError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/validate", response_model=ValidateResponse)
    def validate(payload: ConfigPayload) -> ValidateResponse:
        config = _config_or_422(payload)
        result = pipeline.run_validate(config)
        return ValidateResponse(
            conditions=result["conditions"],
            route_claimed=result["route_claimed"],
            route_observed=result["route_observed"],
        )

    def _solve(config: RunConfig, nodal: bool) -> SolveResponse:
        grid, problem, _, _ = pipeline.build_problem(config)
        try:
            if nodal:
                report = solve_nodal(
                    problem, pipeline._default_seed(config, grid),
                    tol=config.solver_tol, max_iter=config.max_iter,
                    beta_config=config.beta_config, projection_tol=config.projection_tol,
                )
            else:
                report = solve_ground(
                    problem, pipeline._ground_seed(config, grid), tol=config.solver_tol,
                    max_iter=config.max_iter, beta_config=config.beta_config,
                )
        except NonConvergenceError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        if not report.converged:
            raise HTTPException(status_code=409, detail=report.message)
        payload = pipeline._report_dict(report)
        if nodal:
            payload["degree_certificate"] = certify_minimizer(
                problem, report.final_state, n_boundary=config.n_boundary
            )
        return SolveResponse(
            **payload,
            x=grid.nodes.tolist(),
            u=report.final_state.tolist(),
            energy_trace=list(report.energy_trace),
        )

    @app.post("/solve/ground", response_model=SolveResponse)
    def solve_ground_endpoint(payload: ConfigPayload) -> SolveResponse:
        return _solve(_config_or_422(payload), nodal=False)

    @app.post("/solve/nodal", response_model=SolveResponse)
    def solve_nodal_endpoint(payload: ConfigPayload) -> SolveResponse:
        return _solve(_config_or_422(payload), nodal=True)

    @app.post("/multistart", response_model=MultistartResponse)
    def multistart_endpoint(payload: ConfigPayload) -> MultistartResponse:
        config = _config_or_422(payload)
        result = pipeline.run_multistart(config)
        return MultistartResponse(
            n_seeds=result["n_seeds"],
            n_distinct=result["n_distinct"],
            energies=[r["energy"] for r in result["runs"]],
            runs=result["runs"],
        )

    @app.post("/degree", response_model=DegreeResponse)
    def degree_endpoint(payload: DegreeRequest) -> DegreeResponse:
        config = _config_or_422(payload.config)
        try:
            rect = Rectangle(payload.t_lo, payload.t_hi, payload.s_lo, payload.s_hi)
        except ParameterError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        _, problem, _, _ = pipeline.build_problem(config)
        u = np.asarray(payload.u, dtype=float)
        if u.size != config.n:
            raise HTTPException(
                status_code=422, detail=f"solution has {u.size} samples, grid has {config.n}"
            )
        try:
            cert = certify_minimizer(problem, u, rect, config.n_boundary)
        except ParameterError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return DegreeResponse(degree_certificate=cert)

    return app


app = create_app()


def main() -> None:  # pragma: no cover - convenience launcher
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8000)
