"""Least-energy sign-changing solutions of a zero-mass nonlocal field equation.

Core layers: ``grid`` assembles the nonlocal quadratic forms on a truncated
line, ``functional`` provides the energy and its derivative, ``nehari`` the
scalar/nodal scaling projections, ``solver`` the projected descent flows,
``degree`` the winding-number criticality certificate, and ``hypotheses``
the sample-based audit of the standing assumptions.  ``cli`` and
``service`` are thin batch and HTTP front ends over ``pipeline``.
"""

from .config import RunConfig
from .degree import Rectangle, certify_minimizer, winding_number
from .errors import (
    AssemblyError,
    ConfigError,
    DegenerateBoundaryError,
    DivergenceError,
    HypothesisViolationError,
    NodalCollapseError,
    NonConvergenceError,
    ParameterError,
    RegimeError,
    ResolutionError,
)
from .functional import EnergySplit, Problem, cross_term, split
from .grid import (
    Grid,
    QuadraticForm,
    assemble_gagliardo,
    assemble_potential_mass,
    build_grid,
    inner,
    norm_sq,
    seminorm_sq,
)
from .nehari import (
    MembershipReport,
    NodalScales,
    SignProfile,
    h_nodal,
    h_scalar,
    h_scalar_deriv,
    membership,
    nodal_projection,
    phi1,
    phi2,
    phi_grad,
    scalar_projection,
    sign_profile,
)
from .nonlinearity import NonlinearitySpec, critical_exponent, validate_exponent
from .solver import SolveReport, multistart, seed_nodal, solve_ground, solve_nodal

__all__ = [
    "AssemblyError",
    "ConfigError",
    "DegenerateBoundaryError",
    "DivergenceError",
    "EnergySplit",
    "Grid",
    "HypothesisViolationError",
    "MembershipReport",
    "NodalCollapseError",
    "NodalScales",
    "NonConvergenceError",
    "NonlinearitySpec",
    "ParameterError",
    "Problem",
    "QuadraticForm",
    "Rectangle",
    "RegimeError",
    "ResolutionError",
    "RunConfig",
    "SignProfile",
    "SolveReport",
    "assemble_gagliardo",
    "assemble_potential_mass",
    "build_grid",
    "certify_minimizer",
    "critical_exponent",
    "cross_term",
    "h_nodal",
    "h_scalar",
    "h_scalar_deriv",
    "inner",
    "membership",
    "multistart",
    "nodal_projection",
    "norm_sq",
    "phi1",
    "phi2",
    "phi_grad",
    "scalar_projection",
    "seed_nodal",
    "seminorm_sq",
    "sign_profile",
    "solve_ground",
    "solve_nodal",
    "split",
    "validate_exponent",
    "winding_number",
]
