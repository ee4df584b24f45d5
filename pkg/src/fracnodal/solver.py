"""Energy minimization over the Nehari and nodal sets by projected descent.

Each cycle projects the iterate onto the constraint set (scalar rescaling
for the ground flow, the two-parameter nodal rescaling for the nodal flow),
takes a Sobolev-gradient step, and backtracks on the *projected* energy so
the recorded trace is monotone.  At a projected iterate the projected and
free directional derivatives agree, so the usual Armijo test with the
squared residual applies unchanged.

Convergence is declared on the dual norm of the derivative (the energy norm
of the Sobolev gradient).  Criticality of a converged nodal state can be
certified independently with the winding-number check in ``degree``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NodalCollapseError, ParameterError
from .functional import Problem, split
from .nehari import NodalScales, NodalSection, RaySection, _positive_root, _section_projection

_ARMIJO = 1e-4
_MAX_BACKTRACKS = 60


@dataclass
class SolveReport:
    """Outcome of one minimization run."""

    final_state: np.ndarray
    energy: float
    residual: float
    iterations: int
    energy_trace: list[float]
    sign_change: bool
    converged: bool
    scales_at_end: NodalScales | None = None
    message: str = ""


def seed_nodal(grid, centers: tuple[float, float], width: float, amplitude: float) -> np.ndarray:
    """Two-bump seed: negative bump at centers[0], positive bump at centers[1]."""
    x_minus, x_plus = centers
    R = grid.radius
    if not (-R < x_minus < R and -R < x_plus < R):
        raise ParameterError(f"seed centers {centers} must lie inside (-{R}, {R})")
    if width <= 0.0:
        raise ParameterError(f"seed width must be positive, got {width}")
    if amplitude == 0.0:
        raise ParameterError("seed amplitude must be nonzero")
    x = grid.nodes
    w2 = width * width
    return amplitude * (np.exp(-((x - x_plus) ** 2) / w2) - np.exp(-((x - x_minus) ** 2) / w2))


def _scalar_rescale(problem: Problem, u: np.ndarray) -> tuple[np.ndarray, float]:
    section = RaySection(problem, u)
    t = _positive_root(section.slope, 1.0, "scalar projection")
    return t * u, section.value(t)


def solve_ground(
    problem: Problem,
    seed: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 1000,
    beta_config: float = 1e-6,
) -> SolveReport:
    """Minimize the energy over the Nehari set from a nonzero seed."""
    u = np.asarray(seed, dtype=float)
    if problem.norm_sq(u) == 0.0:
        raise ParameterError("ground solve needs a nonzero seed")

    u, energy = _scalar_rescale(problem, u)
    trace = [energy]
    residual = problem.residual_norm(u)
    iterations = 0
    converged = residual <= tol
    message = ""

    while not converged and iterations < max_iter:
        iterations += 1
        g = problem.sobolev_gradient(u)
        res_sq = residual * residual
        gamma = 1.0
        accepted = False
        for _ in range(_MAX_BACKTRACKS):
            trial = u - gamma * g
            if problem.norm_sq(trial) == 0.0:
                gamma *= 0.5
                continue
            candidate, cand_energy = _scalar_rescale(problem, trial)
            if cand_energy <= energy - _ARMIJO * gamma * res_sq:
                accepted = True
                break
            gamma *= 0.5
        if not accepted:
            message = "line search stalled before reaching the tolerance"
            break
        u, energy = candidate, cand_energy
        trace.append(energy)
        residual = problem.residual_norm(u)
        converged = residual <= tol

    if converged and energy <= 0.0:
        converged = False
        message = f"converged to nonpositive energy {energy}; not a valid minimizer"

    up, um = split(u)
    sign_change = (
        np.sqrt(problem.norm_sq(up)) >= beta_config
        and np.sqrt(problem.norm_sq(um)) >= beta_config
    )
    if not converged and not message:
        message = f"iteration budget {max_iter} exhausted at residual {residual:.3e}"
    return SolveReport(
        final_state=u,
        energy=energy,
        residual=residual,
        iterations=iterations,
        energy_trace=trace,
        sign_change=bool(sign_change),
        converged=bool(converged),
        message=message,
    )


def _nodal_rescale(
    problem: Problem, u: np.ndarray, beta_config: float, projection_tol: float
) -> tuple[np.ndarray, float, NodalScales]:
    up, um = split(u)
    pn = np.sqrt(problem.norm_sq(up))
    mn = np.sqrt(problem.norm_sq(um))
    if pn < beta_config or mn < beta_config:
        raise NodalCollapseError(
            f"signed part collapsed (|u+| = {pn:.3e}, |u-| = {mn:.3e}, "
            f"threshold {beta_config}); the seed sits in a one-signed basin"
        )
    section = NodalSection(problem, u)
    scales = _section_projection(section, projection_tol, max_iter=200, validate=False)
    w = scales.t_plus * up + scales.s_minus * um
    return w, float(section.value(scales.t_plus, scales.s_minus)), scales


def solve_nodal(
    problem: Problem,
    seed: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 1000,
    beta_config: float = 1e-6,
    projection_tol: float = 1e-10,
) -> SolveReport:
    """Minimize the energy over the nodal set from a sign-changing seed.

    Raises :class:`NodalCollapseError` if either signed part dies along the
    way, which signals a seed too close to a one-signed basin.
    """
    u = np.asarray(seed, dtype=float)
    u, energy, _ = _nodal_rescale(problem, u, beta_config, projection_tol)
    trace = [energy]
    residual = problem.residual_norm(u)
    iterations = 0
    converged = residual <= tol
    message = ""

    while not converged and iterations < max_iter:
        iterations += 1
        g = problem.sobolev_gradient(u)
        res_sq = residual * residual
        gamma = 1.0
        accepted = False
        collapse: NodalCollapseError | None = None
        for _ in range(_MAX_BACKTRACKS):
            trial = u - gamma * g
            try:
                candidate, cand_energy, _ = _nodal_rescale(
                    problem, trial, beta_config, projection_tol
                )
            except NodalCollapseError as exc:
                collapse = exc
                gamma *= 0.5
                continue
            if cand_energy <= energy - _ARMIJO * gamma * res_sq:
                accepted = True
                break
            gamma *= 0.5
        if not accepted:
            if collapse is not None:
                raise collapse
            message = "line search stalled before reaching the tolerance"
            break
        u, energy = candidate, cand_energy
        trace.append(energy)
        residual = problem.residual_norm(u)
        converged = residual <= tol

    scales_at_end = _section_projection(
        NodalSection(problem, u), projection_tol, max_iter=200, validate=True
    )
    up, um = split(u)
    sign_change = (
        np.sqrt(problem.norm_sq(up)) >= beta_config
        and np.sqrt(problem.norm_sq(um)) >= beta_config
    )
    if not converged and not message:
        message = f"iteration budget {max_iter} exhausted at residual {residual:.3e}"
    return SolveReport(
        final_state=u,
        energy=energy,
        residual=residual,
        iterations=iterations,
        energy_trace=trace,
        sign_change=bool(sign_change),
        converged=bool(converged),
        scales_at_end=scales_at_end,
        message=message,
    )


def _profiles_match(a: np.ndarray, b: np.ndarray, allow_flip: bool) -> bool:
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))), 1e-300)
    direct = float(np.max(np.abs(a - b))) / scale
    if direct <= 1e-2:
        return True
    if allow_flip:
        flipped = float(np.max(np.abs(a + b))) / scale
        return flipped <= 1e-2
    return False


def multistart(
    problem: Problem,
    seeds: list[np.ndarray],
    tol: float = 1e-6,
    max_iter: int = 1000,
    beta_config: float = 1e-6,
) -> list[SolveReport]:
    """Run ground/nodal solves from several seeds and deduplicate the results.

    Requires the odd model (for which sign-flipped states are the same
    orbit); seeds whose nodal flow collapses fall back to a ground solve.
    Reports are deduplicated by relative energy gap 1e-4 *and* normalized
    sup distance 1e-2 after sign alignment, then sorted by energy.
    """
    if problem.nonlinearity.model != "odd_power":
        raise ParameterError("multistart requires the odd_power model")
    found: list[SolveReport] = []
    for seed in seeds:
        seed = np.asarray(seed, dtype=float)
        up, um = split(seed)
        nodal_seed = (
            np.sqrt(problem.norm_sq(up)) >= beta_config
            and np.sqrt(problem.norm_sq(um)) >= beta_config
        )
        try:
            if nodal_seed:
                try:
                    report = solve_nodal(problem, seed, tol, max_iter, beta_config)
                except NodalCollapseError:
                    report = solve_ground(problem, seed, tol, max_iter, beta_config)
            else:
                report = solve_ground(problem, seed, tol, max_iter, beta_config)
        except ParameterError:
            continue
        if not report.converged:
            continue
        duplicate = False
        for kept in found:
            close_energy = abs(report.energy - kept.energy) <= 1e-4 * max(
                1.0, abs(kept.energy)
            )
            if close_energy and _profiles_match(
                report.final_state, kept.final_state, allow_flip=True
            ):
                duplicate = True
                break
        if not duplicate:
            found.append(report)
    found.sort(key=lambda r: r.energy)
    return found
