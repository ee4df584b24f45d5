"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration / parameter problems are
exit 2, solver non-convergence (including nodal collapse) exit 3, and
violated standing hypotheses on the coefficients exit 4.
"""


class ParameterError(ValueError):
    """An argument is outside an operation's admissible range."""


class RegimeError(ParameterError):
    """The fractional order is incompatible with the dimension (need dim > 2*alpha)."""


class HypothesisViolationError(ValueError):
    """Coefficient data violates a standing positivity/growth hypothesis."""


class AssemblyError(RuntimeError):
    """A discrete operator could not be built or factorized."""


class DivergenceError(RuntimeError):
    """A bracketing root search failed to find a sign change."""


class NonConvergenceError(RuntimeError):
    """An iteration hit its budget without meeting its tolerance."""


class NodalCollapseError(NonConvergenceError):
    """One signed part of the iterate collapsed below the tracking threshold."""


class DegenerateBoundaryError(RuntimeError):
    """A map vanishes (numerically) somewhere on the winding contour."""


class ResolutionError(RuntimeError):
    """Boundary sampling could not be refined enough to resolve the winding."""


class ConfigError(ValueError):
    """A run configuration entry is missing, malformed, or inconsistent."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key '{key}': {message}")
