"""The discrete energy, its derivative pairing, and sign-part decompositions.

With G the norm operator of the assembled form and lumped weights
km_i = K_i * mass_i, the energy and its directional derivative are

    J(u)        = u.G.u / 2 - sum_i km_i F(u_i)
    <J'(u), v>  = u.G.v     - sum_i km_i f(u_i) v_i.

Because the nonlinear term uses the same lumped quadrature as the mass
terms, the pairing is the exact gradient of the energy, and the splitting
identities below hold to rounding rather than to quadrature error:

    J(u)        = J(u+) + J(u-) - B(u+, u-)
    <J'(u), u+> = <J'(u+), u+>  - B(u+, u-)

where B is the kernel interaction between the signed parts, realized from
the assembled interior matrix itself as B = -(u+) . A . (u-).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .errors import AssemblyError, HypothesisViolationError, ParameterError
from .grid import QuadraticForm, norm_sq
from .nonlinearity import NonlinearitySpec


def split(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Positive and negative parts with u = u_plus + u_minus exactly."""
    u = np.asarray(u, dtype=float)
    return np.maximum(u, 0.0), np.minimum(u, 0.0)


def cross_term(form: QuadraticForm, u_plus: np.ndarray, u_minus: np.ndarray) -> float:
    """Kernel interaction B(u+, u-) <= 0 between the signed parts.

    Reuses the assembled interior weights (not a second quadrature), so the
    energy decomposition is an algebraic identity of the discretization.
    """
    u_plus = np.asarray(u_plus, dtype=float)
    u_minus = np.asarray(u_minus, dtype=float)
    if np.any(u_plus < 0.0):
        raise ParameterError("u_plus must be nonnegative")
    if np.any(u_minus > 0.0):
        raise ParameterError("u_minus must be nonpositive")
    return -float(u_plus @ (form.interior @ u_minus))


@dataclass(frozen=True)
class EnergySplit:
    total: float
    plus: float
    minus: float
    cross: float


class Problem:
    """Energy functional for a fixed form, nonlinearity, and weight K."""

    def __init__(self, form: QuadraticForm, nonlinearity: NonlinearitySpec, K: np.ndarray):
        K = np.asarray(K, dtype=float)
        if K.shape != (form.grid.n,):
            raise ParameterError("weight samples K do not match the grid")
        bad = np.flatnonzero(~(K > 0.0))
        if bad.size:
            i = int(bad[0])
            raise HypothesisViolationError(
                f"weight must be strictly positive; K[{i}] = {K[i]} at x = {form.grid.nodes[i]}"
            )
        self.form = form
        self.nonlinearity = nonlinearity
        self.K = K
        self.k_mass = K * form.grid.nodal_mass
        self._cho = None

    @property
    def grid(self):
        return self.form.grid

    def norm_sq(self, u: np.ndarray) -> float:
        return norm_sq(self.form, u)

    def energy(self, u: np.ndarray) -> float:
        u = np.asarray(u, dtype=float)
        return 0.5 * self.norm_sq(u) - float(self.k_mass @ self.nonlinearity.F(u))

    def energy_split(self, u: np.ndarray) -> EnergySplit:
        up, um = split(u)
        return EnergySplit(
            total=self.energy(u),
            plus=self.energy(up),
            minus=self.energy(um),
            cross=cross_term(self.form, up, um),
        )

    def derivative_pairing(self, u: np.ndarray, v: np.ndarray) -> float:
        """Directional derivative <J'(u), v>."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if u.shape != v.shape or u.shape != (self.grid.n,):
            raise ParameterError("state and direction must both match the grid")
        Gv = self.form.operator() @ v
        return float(u @ Gv - self.k_mass @ (self.nonlinearity.f(u) * v))

    def gradient_vector(self, u: np.ndarray) -> np.ndarray:
        """Euclidean gradient r with r_i = <J'(u), e_i>."""
        u = np.asarray(u, dtype=float)
        return self.form.operator() @ u - self.k_mass * self.nonlinearity.f(u)

    def _factorization(self):
        if self._cho is None:
            try:
                self._cho = cho_factor(self.form.operator(), lower=True)
            except LinAlgError as exc:
                raise AssemblyError(
                    "norm operator is not positive definite; check that the "
                    "potential is strictly positive"
                ) from exc
        return self._cho

    def sobolev_gradient(self, u: np.ndarray) -> np.ndarray:
        """Riesz representative g of J'(u) in the energy inner product.

        Solves G g = r so that <J'(u), v> = <g, v>_G for every v; in
        particular <J'(u), g> = |g|_G^2 >= 0, making -g a descent direction.
        """
        r = self.gradient_vector(u)
        return cho_solve(self._factorization(), r)

    def residual_norm(self, u: np.ndarray) -> float:
        """Dual norm of J'(u): the G-norm of the Sobolev gradient."""
        r = self.gradient_vector(u)
        g = cho_solve(self._factorization(), r)
        return float(np.sqrt(max(r @ g, 0.0)))
