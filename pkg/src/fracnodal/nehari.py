"""Scalar and two-parameter Nehari projections, membership, and diagnostics.

For u != 0 the ray energy t -> J(t u) rises once and then falls; its unique
stationary scale t_u puts t_u*u on the Nehari set {<J'(v), v> = 0}.  For a
sign-changing u the section

    h(t, s) = J(t u+ + s u-),   grad h = (<J'(.), u+>, <J'(.), u->)

has a unique interior maximum (t_plus, s_minus); scaling the parts by it
lands in the nodal subset where both signed pairings vanish.  The maximum
is located by iterating (t, s) <- (root_t(s), root_s(t)) from (1, 1), with
an alternating one-dimensional maximization fallback that increases h
monotonically when the plain iteration stalls.

All section evaluations reduce to five precomputed ingredients (the part
norms, their kernel interaction, and the nodal weights on each support),
so every energy/gradient call here is O(n) after an O(n^2) setup.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, ParameterError
from .functional import Problem, split

_BRACKET_STEPS = 60
_WIDTH_REL = 1e-12


@dataclass(frozen=True)
class NodalScales:
    """Converged scale pair for the two signed parts.

    ``residual`` is the absolute max-norm of the section gradient at the
    returned point; convergence is judged against the tolerance times the
    section's leading magnitude, so it is invariant under amplitude
    rescalings of the underlying state.
    """

    t_plus: float
    s_minus: float
    residual: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class MembershipReport:
    in_nehari: bool
    nehari_residual: float
    in_nodal_set: bool
    plus_residual: float
    minus_residual: float
    plus_norm: float
    minus_norm: float


@dataclass(frozen=True)
class SignProfile:
    """Radial slope diagnostics r*grad_h along each axis through the maximum."""

    r: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray
    scales: NodalScales


class RaySection:
    """J restricted to the ray {t u}: value and derivative in O(n) per call."""

    def __init__(self, problem: Problem, u: np.ndarray):
        u = np.asarray(u, dtype=float)
        self.norm2 = problem.norm_sq(u)
        if self.norm2 == 0.0:
            raise ParameterError("ray section undefined for the zero state")
        nz = np.flatnonzero(u)
        self.u = u[nz]
        self.km = problem.k_mass[nz]
        self.spec = problem.nonlinearity

    def value(self, t: float) -> float:
        return 0.5 * t * t * self.norm2 - float(self.km @ self.spec.F(t * self.u))

    def slope(self, t: float) -> float:
        return t * self.norm2 - float(self.km @ (self.spec.f(t * self.u) * self.u))


class NodalSection:
    """h(t, s) = J(t u+ + s u-) and its gradient, vectorized in (t, s)."""

    def __init__(self, problem: Problem, u: np.ndarray):
        u = np.asarray(u, dtype=float)
        up, um = split(u)
        G = problem.form.operator()
        Gup = G @ up
        Gum = G @ um
        self.a_plus = float(up @ Gup)
        self.a_minus = float(um @ Gum)
        if self.a_plus == 0.0 or self.a_minus == 0.0:
            raise ParameterError("both signed parts must be nonzero for the nodal section")
        # diagonal weights do not couple the parts, so up.G.um is pure kernel
        self.b_cross = -float(up @ Gum)
        pz = np.flatnonzero(up)
        mz = np.flatnonzero(um)
        self.up = up[pz]
        self.km_p = problem.k_mass[pz]
        self.um = um[mz]
        self.km_m = problem.k_mass[mz]
        self.spec = problem.nonlinearity
        self.u_plus = up
        self.u_minus = um

    def _source_plus(self, t):
        t = np.asarray(t, dtype=float)
        return self.km_p @ self.spec.F(np.multiply.outer(t, self.up)).T

    def _source_minus(self, s):
        s = np.asarray(s, dtype=float)
        return self.km_m @ self.spec.F(np.multiply.outer(s, self.um)).T

    def value(self, t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        quad = (
            0.5 * t * t * self.a_plus
            + 0.5 * s * s * self.a_minus
            - t * s * self.b_cross
        )
        return quad - self._source_plus(t) - self._source_minus(s)

    def grad(self, t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        fp = self.km_p @ (self.spec.f(np.multiply.outer(t, self.up)) * self.up).T
        fm = self.km_m @ (self.spec.f(np.multiply.outer(s, self.um)) * self.um).T
        g1 = t * self.a_plus - s * self.b_cross - fp
        g2 = s * self.a_minus - t * self.b_cross - fm
        return g1, g2

    def grad_scale(self, t: float, s: float) -> float:
        """Magnitude of the gradient's leading terms; the residual tolerance
        is relative to this so amplitude rescalings of u cancel out."""
        return t * self.a_plus + s * self.a_minus + (t + s) * abs(self.b_cross)


# --------------------------------------------------------------------------
# scalar projection
# --------------------------------------------------------------------------

def h_scalar(problem: Problem, u: np.ndarray, t: float) -> float:
    """Ray energy J(t u)."""
    return RaySection(problem, u).value(float(t))


def h_scalar_deriv(problem: Problem, u: np.ndarray, t: float) -> float:
    """Ray slope d/dt J(t u) = <J'(t u), u>."""
    return RaySection(problem, u).slope(float(t))


def _bisect(fn, lo: float, hi: float, atol: float = 0.0) -> float:
    """Bisect fn (positive at lo, negative at hi) to relative width 1e-12.

    A positive ``atol`` allows an early exit once |fn| drops below it.
    """
    while hi - lo > _WIDTH_REL * hi:
        mid = 0.5 * (lo + hi)
        val = fn(mid)
        if atol > 0.0 and abs(val) <= atol:
            return mid
        if val > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _positive_root(fn, start: float, what: str, atol: float = 0.0) -> float:
    """Root of a slope-like fn that is positive for small arguments."""
    t = start
    val = fn(t)
    if val == 0.0:
        return t
    if val > 0.0:
        hi = t
        for _ in range(_BRACKET_STEPS):
            hi *= 2.0
            if fn(hi) < 0.0:
                return _bisect(fn, hi / 2.0, hi, atol)
        raise DivergenceError(
            f"{what}: no sign change within {_BRACKET_STEPS} doublings; "
            "the nonlinearity may lack superquadratic growth on this support"
        )
    lo = t
    for _ in range(_BRACKET_STEPS):
        lo *= 0.5
        if fn(lo) > 0.0:
            return _bisect(fn, lo, 2.0 * lo, atol)
    raise DivergenceError(f"{what}: slope stays negative down to {lo}")


def scalar_projection(problem: Problem, u: np.ndarray, tol: float = 1e-10) -> float:
    """Unique t_u > 0 with <J'(t_u u), u> = 0, by bracketing and bisection."""
    section = RaySection(problem, u)
    t = _positive_root(section.slope, 1.0, "scalar projection")
    scale = 1.0 + section.norm2
    if abs(section.slope(t)) > tol * scale:
        raise DivergenceError(
            f"scalar projection residual {section.slope(t):.3e} exceeds tolerance"
        )
    return t


# --------------------------------------------------------------------------
# nodal projection
# --------------------------------------------------------------------------

def h_nodal(problem: Problem, u: np.ndarray, t: float, s: float) -> float:
    """Section energy J(t u+ + s u-)."""
    return float(NodalSection(problem, u).value(float(t), float(s)))


def phi_grad(problem: Problem, u: np.ndarray, t: float, s: float) -> tuple[float, float]:
    """Gradient of the section: the two signed derivative pairings."""
    g1, g2 = NodalSection(problem, u).grad(float(t), float(s))
    return float(g1), float(g2)


def _root_in_t(section: NodalSection, s: float, start: float) -> float:
    return _positive_root(lambda t: float(section.grad(t, s)[0]), start, "partial root in t")


def _root_in_s(section: NodalSection, t: float, start: float) -> float:
    return _positive_root(lambda s: float(section.grad(t, s)[1]), start, "partial root in s")


def phi1(problem: Problem, u: np.ndarray, s: float, tol: float = 0.0) -> float:
    """Unique t > 0 zeroing the first section derivative at fixed s.

    ``tol`` permits an early exit on the slope magnitude; by default the
    root is polished to relative bracket width 1e-12.
    """
    if s < 0.0:
        raise ParameterError("s must be nonnegative")
    section = NodalSection(problem, u)
    atol = tol * section.grad_scale(1.0, float(s)) if tol > 0.0 else 0.0
    return _positive_root(
        lambda t: float(section.grad(t, float(s))[0]), 1.0, "partial root in t", atol
    )


def phi2(problem: Problem, u: np.ndarray, t: float, tol: float = 0.0) -> float:
    """Unique s > 0 zeroing the second section derivative at fixed t."""
    if t < 0.0:
        raise ParameterError("t must be nonnegative")
    section = NodalSection(problem, u)
    atol = tol * section.grad_scale(float(t), 1.0) if tol > 0.0 else 0.0
    return _positive_root(
        lambda s: float(section.grad(float(t), s)[1]), 1.0, "partial root in s", atol
    )


def _section_projection(
    section: NodalSection,
    tol: float,
    max_iter: int,
    fixed_point_budget: int = 25,
    validate: bool = True,
) -> NodalScales:
    t, s = 1.0, 1.0
    iterations = 0

    def residual(t: float, s: float) -> float:
        g1, g2 = section.grad(t, s)
        return max(abs(float(g1)), abs(float(g2)))

    def done(t: float, s: float) -> bool:
        return residual(t, s) <= tol * section.grad_scale(t, s)

    converged = done(t, s)

    # plain fixed-point iteration of (t, s) <- (root_t(old s), root_s(old t))
    if not converged:
        prev_step = np.inf
        for _ in range(fixed_point_budget):
            iterations += 1
            t_new = _root_in_t(section, s, max(t, 1e-8))
            s_new = _root_in_s(section, t, max(s, 1e-8))
            step = max(abs(t_new - t), abs(s_new - s))
            t, s = t_new, s_new
            if done(t, s):
                converged = True
                break
            if step >= prev_step and iterations >= 3:
                break  # stalled or oscillating; hand over to coordinate ascent
            prev_step = step

    # coordinate ascent: alternate exact 1-D maximizations, monotone in h
    if not converged:
        for _ in range(iterations, max_iter):
            iterations += 1
            t = _root_in_t(section, s, max(t, 1e-8))
            s = _root_in_s(section, t, max(s, 1e-8))
            if done(t, s):
                converged = True
                break

    res = residual(t, s)
    if converged and validate:
        # the returned point must dominate a coarse scan of the quadrant
        tt = np.linspace(1e-3 * t, 3.0 * t, 24)
        ss = np.linspace(1e-3 * s, 3.0 * s, 24)
        vals = section.value(np.repeat(tt, ss.size), np.tile(ss, tt.size))
        here = float(section.value(t, s))
        if np.max(vals) > here + 1e-9 * (1.0 + abs(here)):
            converged = False
    return NodalScales(
        t_plus=float(t),
        s_minus=float(s),
        residual=float(res),
        iterations=iterations,
        converged=bool(converged),
    )


def nodal_projection(
    problem: Problem,
    u: np.ndarray,
    tol: float = 1e-9,
    max_iter: int = 200,
    validate: bool = True,
) -> NodalScales:
    """Scale pair placing t u+ + s u- in the nodal set (unique section maximum)."""
    section = NodalSection(problem, u)
    return _section_projection(section, tol, max_iter, validate=validate)


def sign_profile(problem: Problem, u: np.ndarray, radius_grid: np.ndarray) -> SignProfile:
    """Sample r * grad_h along each axis through the converged maximum.

    The first component is positive before t_plus and negative after (and
    the mirrored statement holds for the second), which is the observable
    sign pattern of the unique-maximum structure.
    """
    section = NodalSection(problem, u)
    scales = _section_projection(section, tol=1e-10, max_iter=200)
    r = np.asarray(radius_grid, dtype=float)
    g1, _ = section.grad(r, np.full_like(r, scales.s_minus))
    _, g2 = section.grad(np.full_like(r, scales.t_plus), r)
    return SignProfile(r=r, a_plus=g1 * r, a_minus=g2 * r, scales=scales)


def membership(
    problem: Problem,
    u: np.ndarray,
    beta_config: float = 1e-6,
    tol: float = 1e-8,
) -> MembershipReport:
    """Residual-based membership report for the Nehari and nodal sets.

    The nodal thresholds are half the Nehari threshold, so a nodal pass
    implies a Nehari pass (the whole pairing is the sum of the signed ones).
    """
    u = np.asarray(u, dtype=float)
    up, um = split(u)
    n2 = problem.norm_sq(u)
    source = abs(float(problem.k_mass @ (problem.nonlinearity.f(u) * u)))
    scale = n2 + source  # amplitude-invariant comparison magnitude
    r_all = abs(problem.derivative_pairing(u, u))
    r_plus = abs(problem.derivative_pairing(u, up))
    r_minus = abs(problem.derivative_pairing(u, um))
    pn = float(np.sqrt(problem.norm_sq(up)))
    mn = float(np.sqrt(problem.norm_sq(um)))
    in_nehari = n2 > 0.0 and r_all <= 2.0 * tol * scale
    in_nodal = (
        pn >= beta_config
        and mn >= beta_config
        and r_plus <= tol * scale
        and r_minus <= tol * scale
    )
    return MembershipReport(
        in_nehari=bool(in_nehari),
        nehari_residual=float(r_all),
        in_nodal_set=bool(in_nodal),
        plus_residual=float(r_plus),
        minus_residual=float(r_minus),
        plus_norm=pn,
        minus_norm=mn,
    )
