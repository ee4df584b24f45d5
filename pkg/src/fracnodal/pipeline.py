"""Shared wiring between configuration and the numerical modules.

Each ``run_*`` function takes a validated :class:`RunConfig`, performs one
unit of work, and returns a JSON-ready dict; file outputs are written only
when an output directory is passed.  The CLI calls these in-process and the
HTTP service exposes them per request, so both front ends stay thin.
"""

from __future__ import annotations

import os

import numpy as np

from ._serialize import write_columns_csv, write_json
from .config import RunConfig
from .degree import Rectangle, UNIT_BOX, certify_minimizer
from .errors import ConfigError, NonConvergenceError
from .functional import Problem
from .grid import (
    Grid,
    assemble_gagliardo,
    assemble_potential_mass,
    build_grid,
    export_form_csv,
    norm_sq,
    seminorm_sq,
)
from .hypotheses import validate_pair
from .nehari import membership
from .nonlinearity import NonlinearitySpec
from .presets import potential_pair, seed_family
from .solver import SolveReport, multistart, seed_nodal, solve_ground, solve_nodal


def build_problem(config: RunConfig) -> tuple[Grid, Problem, np.ndarray, np.ndarray]:
    """Grid, assembled problem, and coefficient samples for a configuration."""
    grid = build_grid(config.radius, config.n)
    V, K = potential_pair(config.potential, grid.nodes, config.potential_file)
    form = assemble_gagliardo(grid, config.alpha, config.quad_order)
    form = form.with_potential(assemble_potential_mass(grid, V))
    spec = NonlinearitySpec(model=config.model, m=config.m)
    problem = Problem(form, spec, K)
    return grid, problem, V, K


def _default_seed(config: RunConfig, grid: Grid) -> np.ndarray:
    return seed_nodal(
        grid,
        centers=(config.seed_center_minus, config.seed_center_plus),
        width=config.seed_width,
        amplitude=config.seed_amplitude,
    )


def _report_dict(report: SolveReport) -> dict:
    out = {
        "energy": report.energy,
        "residual": report.residual,
        "iterations": report.iterations,
        "sign_change": report.sign_change,
        "converged": report.converged,
        "message": report.message,
        "scales": None,
        "degree_certificate": None,
    }
    if report.scales_at_end is not None:
        out["scales"] = {
            "t_plus": report.scales_at_end.t_plus,
            "s_minus": report.scales_at_end.s_minus,
            "residual": report.scales_at_end.residual,
            "iterations": report.scales_at_end.iterations,
            "converged": report.scales_at_end.converged,
        }
    return out


def run_assemble(config: RunConfig, outdir: str | None = None, export_matrix: bool = False) -> dict:
    """Assemble the forms and report diagnostic invariants of the discretization."""
    grid, problem, V, K = build_problem(config)
    form = problem.form
    ones = np.ones(grid.n)
    gaussian = np.exp(-(grid.nodes ** 2))
    diag = {
        "n": grid.n,
        "spacing": grid.spacing,
        "radius": grid.radius,
        "alpha": config.alpha,
        "interior_max": float(np.max(np.abs(form.interior))),
        "symmetry_residual": float(np.max(np.abs(form.interior - form.interior.T))),
        "constant_seminorm": float(ones @ form.interior @ ones),
        "rowsum_max": float(np.max(np.abs(form.interior.sum(axis=1)))),
        "exterior_weight_min": float(np.min(form.exterior_weights)),
        "exterior_weight_max": float(np.max(form.exterior_weights)),
        "potential_mass_min": float(np.min(form.potential_mass)),
        "potential_mass_max": float(np.max(form.potential_mass)),
        "gaussian_seminorm_sq": seminorm_sq(form, gaussian),
        "gaussian_norm_sq": norm_sq(form, gaussian),
    }
    files = []
    if outdir is not None:
        files.append(write_json(os.path.join(outdir, "assembly.json"), diag))
        if export_matrix:
            files.extend(export_form_csv(form, outdir))
    diag["files"] = files
    return diag


def run_validate(config: RunConfig, outdir: str | None = None) -> dict:
    """Audit the configured coefficient pair and nonlinearity."""
    grid = build_grid(config.radius, config.n)
    V, K = potential_pair(config.potential, grid.nodes, config.potential_file)
    spec = NonlinearitySpec(model=config.model, m=config.m)
    report = validate_pair(
        grid.nodes, V, K, spec, config.m, config.alpha, config.dim,
        window_measure=config.window_measure,
    )
    out = report.as_dict()
    out["table"] = report.table()
    if outdir is not None:
        out["files"] = [write_json(os.path.join(outdir, "hypotheses.json"), report.as_dict())]
    return out


def _write_solution(outdir: str, grid: Grid, report: SolveReport, stem: str = "solution") -> list[str]:
    files = [
        write_columns_csv(
            os.path.join(outdir, f"{stem}.csv"), "x,u", [grid.nodes, report.final_state]
        ),
        write_columns_csv(
            os.path.join(outdir, "trace.csv"),
            "iteration,energy",
            [np.arange(len(report.energy_trace)), np.asarray(report.energy_trace)],
        ),
    ]
    return files


def _ground_seed(config: RunConfig, grid: Grid) -> np.ndarray:
    # single centered bump: the natural one-signed starting profile
    w2 = config.seed_width ** 2
    return abs(config.seed_amplitude) * np.exp(-(grid.nodes ** 2) / w2)


def run_solve_ground(config: RunConfig, outdir: str | None = None) -> dict:
    grid, problem, _, _ = build_problem(config)
    seed = _ground_seed(config, grid)
    report = solve_ground(
        problem, seed, tol=config.solver_tol, max_iter=config.max_iter,
        beta_config=config.beta_config,
    )
    out = _report_dict(report)
    if outdir is not None:
        files = _write_solution(outdir, grid, report)
        files.append(write_json(os.path.join(outdir, "report.json"), out))
        out["files"] = files
    if not report.converged:
        raise NonConvergenceError(report.message)
    return out


def run_solve_nodal(config: RunConfig, outdir: str | None = None) -> dict:
    grid, problem, _, _ = build_problem(config)
    seed = _default_seed(config, grid)
    report = solve_nodal(
        problem, seed, tol=config.solver_tol, max_iter=config.max_iter,
        beta_config=config.beta_config, projection_tol=config.projection_tol,
    )
    out = _report_dict(report)
    member = membership(
        problem, report.final_state, beta_config=config.beta_config, tol=config.solver_tol
    )
    out["membership"] = {
        "in_nehari": member.in_nehari,
        "in_nodal_set": member.in_nodal_set,
        "plus_norm": member.plus_norm,
        "minus_norm": member.minus_norm,
        "plus_residual": member.plus_residual,
        "minus_residual": member.minus_residual,
    }
    if report.converged:
        out["degree_certificate"] = certify_minimizer(
            problem, report.final_state, UNIT_BOX, config.n_boundary
        )
    if outdir is not None:
        files = _write_solution(outdir, grid, report)
        files.append(write_json(os.path.join(outdir, "report.json"), out))
        out["files"] = files
    if not report.converged:
        raise NonConvergenceError(report.message)
    return out


def run_multistart(config: RunConfig, outdir: str | None = None) -> dict:
    grid, problem, _, _ = build_problem(config)
    seeds = seed_family(grid, config.seed_width, config.seed_amplitude)
    reports = multistart(
        problem, seeds, tol=config.solver_tol, max_iter=config.max_iter,
        beta_config=config.beta_config,
    )
    out = {
        "n_seeds": len(seeds),
        "n_distinct": len(reports),
        "runs": [_report_dict(r) for r in reports],
    }
    if outdir is not None:
        files = []
        for k, report in enumerate(reports):
            files.append(
                write_columns_csv(
                    os.path.join(outdir, f"solution_{k}.csv"),
                    "x,u",
                    [grid.nodes, report.final_state],
                )
            )
        files.append(write_json(os.path.join(outdir, "multistart.json"), out))
        out["files"] = files
    return out


def load_solution_csv(path: str, grid: Grid) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError("solution", f"cannot read {path}: {exc}") from exc
    if data.shape[1] != 2:
        raise ConfigError("solution", f"expected 2 columns x,u in {path}")
    if data.shape[0] != grid.n or not np.allclose(data[:, 0], grid.nodes, atol=1e-10):
        raise ConfigError("solution", f"x column of {path} does not match the configured grid")
    return data[:, 1]


def run_degree_check(
    config: RunConfig,
    solution_path: str,
    rect: Rectangle = UNIT_BOX,
    outdir: str | None = None,
) -> dict:
    """Winding certificate for a previously computed nodal solution."""
    grid, problem, _, _ = build_problem(config)
    u = load_solution_csv(solution_path, grid)
    cert = certify_minimizer(problem, u, rect, config.n_boundary)
    out = {
        "degree_certificate": cert,
        "rectangle": {"t_lo": rect.t_lo, "t_hi": rect.t_hi, "s_lo": rect.s_lo, "s_hi": rect.s_hi},
        "n_boundary": config.n_boundary,
    }
    if outdir is not None:
        out["files"] = [write_json(os.path.join(outdir, "degree.json"), out)]
    return out
