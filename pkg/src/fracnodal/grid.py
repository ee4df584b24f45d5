"""Uniform grids on a truncated line and the discrete nonlocal quadratic forms.

The energy space pairs the Gagliardo seminorm

    [u]^2 = iint |u(x) - u(y)|^2 / |x - y|^(1+2a) dx dy

with a weighted mass term  int V u^2.  Functions are piecewise-linear (P1)
interpolants of nodal values on [-R, R], extended by zero outside.  The
double integral then splits into

  * an interior part over [-R,R]^2, assembled exactly on touching cell
    pairs (closed-form antiderivatives of the polynomial-times-kernel
    integrand) and by a fixed-order tensor Gauss rule on separated pairs;
  * an exterior tail  2 int u(x)^2 rho(x) dx  with the explicit density
    rho(x) = [(R-x)^(-2a) + (R+x)^(-2a)] / (2a), realized by per-node
    weights (closed-form integrals of rho against each hat function, so
    the weights stay finite at the boundary nodes).

The raw kernel |x-y|^(-1-2a) is used without any normalizing constant; all
energies, projections, and certificates in this package are built from the
same form, so the convention cancels everywhere it could matter.

Only dimension 1 is assembled, which restricts the order to a < 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import HypothesisViolationError, ParameterError, RegimeError


@dataclass(frozen=True)
class Grid:
    """Uniform nodes x_0 < ... < x_{n-1} spanning [-radius, radius]."""

    nodes: np.ndarray
    spacing: float
    radius: float
    dim: int = 1

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def nodal_mass(self) -> np.ndarray:
        """P1 lumped quadrature weights: h inside, h/2 at the two ends."""
        mass = np.full(self.n, self.spacing)
        mass[0] *= 0.5
        mass[-1] *= 0.5
        return mass


def build_grid(radius: float, n: int) -> Grid:
    """Build a uniform grid with an odd node count (so x = 0 is a node)."""
    if not np.isfinite(radius) or radius <= 0.0:
        raise ParameterError(f"radius must be positive, got {radius}")
    if n < 3:
        raise ParameterError(f"need at least 3 nodes, got {n}")
    if n % 2 == 0:
        raise ParameterError(f"node count must be odd so 0 is a node, got {n}")
    h = 2.0 * radius / (n - 1)
    nodes = np.linspace(-radius, radius, n)
    return Grid(nodes=nodes, spacing=h, radius=float(radius))


@dataclass
class QuadraticForm:
    """Discrete realization of the nonlocal norm on a grid.

    ``interior`` is the dense symmetric matrix of the truncated double
    integral, ``exterior_weights`` the diagonal tail weights, and
    ``potential_mass`` the diagonal weights of int V u^2 (zeros until a
    potential is attached).
    """

    grid: Grid
    alpha: float
    interior: np.ndarray
    exterior_weights: np.ndarray
    potential_mass: np.ndarray
    _operator: np.ndarray | None = field(default=None, repr=False)

    def with_potential(self, weights: np.ndarray) -> "QuadraticForm":
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (self.grid.n,):
            raise ParameterError("potential weight vector does not match the grid")
        return replace(self, potential_mass=weights, _operator=None)

    def operator(self) -> np.ndarray:
        """Dense matrix G with u.G.v equal to the full norm pairing."""
        if self._operator is None:
            G = self.interior.copy()
            diag = np.arange(self.grid.n)
            G[diag, diag] += self.exterior_weights + self.potential_mass
            self._operator = G
        return self._operator


# --------------------------------------------------------------------------
# interior assembly
# --------------------------------------------------------------------------

def _band_add(flat: np.ndarray, n: int, dr: int, dc: int, count: int, value: float) -> None:
    """Add ``value`` at entries (i+dr, i+dc) for i = 0..count-1 of an n x n matrix."""
    start = dr * n + dc
    flat[start : start + count * (n + 1) : n + 1] += value


def _power_moment(p: int, s: float) -> float:
    """int_0^1 w^p (1+w)^s dw for p in {0,1,2} (exact, via t = 1+w)."""
    def seg(e: float) -> float:
        return (2.0 ** (e + 1.0) - 1.0) / (e + 1.0)

    if p == 0:
        return seg(s)
    if p == 1:
        return seg(s + 1.0) - seg(s)
    if p == 2:
        return seg(s + 2.0) - 2.0 * seg(s + 1.0) + seg(s)
    raise ValueError(p)


def _touching_moments(beta: float) -> tuple[float, float, float]:
    """Exact m_pq = iint_[0,1]^2 w^p z^q (w+z)^(-beta) dw dz for (p,q) in {(2,0),(1,1),(0,2)}.

    Integrating in z first leaves sums of w^k (1+w)^s terms handled by
    ``_power_moment``.  Valid for beta in (1, 2), i.e. alpha < 1/2.
    """
    g1 = 1.0 - beta
    g2 = 2.0 - beta
    g3 = 3.0 - beta

    def m_p0(p: int) -> float:
        return (_power_moment(p, g1) - 1.0 / (p + g1 + 1.0)) / g1

    def m_p1(p: int) -> float:
        first = (_power_moment(p, g2) - 1.0 / (p + g2 + 1.0)) / g2
        second = (_power_moment(p + 1, g1) - 1.0 / (p + g1 + 2.0)) / g1
        return first - second

    def m_p2(p: int) -> float:
        t1 = (_power_moment(p, g3) - 1.0 / (p + g3 + 1.0)) / g3
        t2 = (_power_moment(p + 1, g2) - 1.0 / (p + g2 + 2.0)) / g2
        t3 = (_power_moment(p + 2, g1) - 1.0 / (p + g1 + 3.0)) / g1
        return t1 - 2.0 * t2 + t3

    return m_p0(2), m_p1(1), m_p2(0)


def adjacent_cell_matrix(alpha: float) -> np.ndarray:
    """Reference 3x3 form of one adjacent cell pair on nodes (a, a+1, a+2).

    In cell coordinates the difference of the interpolant is
    u_a*w + u_{a+1}*(z-w) - u_{a+2}*z with kernel (w+z)^(-1-2a); the entries
    are the exact moments of those products.  Scale by h^(1-2a) and count
    both orientations when scattering.
    """
    m20, m11, m02 = _touching_moments(1.0 + 2.0 * alpha)
    return np.array(
        [
            [m20, m11 - m20, -m11],
            [m11 - m20, m20 + m02 - 2.0 * m11, m11 - m02],
            [-m11, m11 - m02, m02],
        ]
    )


def same_cell_coefficient(alpha: float) -> float:
    """Exact coefficient c with cell contribution c*(u_{k+1}-u_k)^2*h^(1-2a)."""
    return 2.0 / ((2.0 - 2.0 * alpha) * (3.0 - 2.0 * alpha))


def _separated_pair_matrices(gaps: np.ndarray, beta: float, order: int) -> np.ndarray:
    """Tensor-Gauss 4x4 forms for all cell pairs at the given gaps (>= 2).

    Returns an array of shape (len(gaps), 4, 4); entries are moments of
    products of (1-xi, xi, -(1-zeta), -zeta) against (g + zeta - xi)^(-beta).
    """
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    xi = x[:, None]
    zeta = x[None, :]
    psi = np.stack(
        [
            np.broadcast_to(1.0 - xi, (order, order)),
            np.broadcast_to(xi, (order, order)),
            np.broadcast_to(-(1.0 - zeta), (order, order)),
            np.broadcast_to(-zeta, (order, order)),
        ]
    )
    w2 = w[:, None] * w[None, :]
    kern = (gaps[:, None, None] + (zeta - xi)[None, :, :]) ** (-beta)
    return np.einsum("aij,bij,gij->gab", psi, psi, kern * w2[None, :, :], optimize=True)


def assemble_gagliardo(grid: Grid, alpha: float, quad_order: int = 16) -> QuadraticForm:
    """Assemble the interior matrix and exterior tail weights for a given order.

    Touching cell pairs (gap 0 and 1) use the exact closed-form moments;
    separated pairs use a fixed-order Gauss product rule, which is accurate
    to near machine precision because their integrand is smooth.
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"fractional order must lie in (0, 1), got {alpha}")
    if 2.0 * alpha >= grid.dim:
        raise RegimeError(
            f"constraint dim > 2*alpha violated (dim={grid.dim}, alpha={alpha})"
        )
    n = grid.n
    h = grid.spacing
    beta = 1.0 + 2.0 * alpha
    scale = h ** (1.0 - 2.0 * alpha)

    A = np.zeros((n, n))
    flat = A.ravel()
    n_cells = n - 1

    # gap 0: each cell contributes c0 * (u_{k+1} - u_k)^2
    c0 = same_cell_coefficient(alpha) * scale
    _band_add(flat, n, 0, 0, n_cells, c0)
    _band_add(flat, n, 1, 1, n_cells, c0)
    _band_add(flat, n, 0, 1, n_cells, -c0)
    _band_add(flat, n, 1, 0, n_cells, -c0)

    # gap 1: exact 3x3 form on node triples, both orientations
    L = 2.0 * scale * adjacent_cell_matrix(alpha)
    for r in range(3):
        for c in range(3):
            _band_add(flat, n, r, c, n_cells - 1, L[r, c])

    # gaps >= 2: Gauss product rule, translation invariant per gap
    if n_cells >= 3:
        gaps = np.arange(2, n_cells, dtype=float)
        mats = 2.0 * scale * _separated_pair_matrices(gaps, beta, quad_order)
        for k, g in enumerate(range(2, n_cells)):
            offsets = (0, 1, g, g + 1)
            M = mats[k]
            count = n_cells - g
            for r in range(4):
                for c in range(4):
                    _band_add(flat, n, offsets[r], offsets[c], count, M[r, c])

    w_ext = exterior_tail_weights(grid, alpha)
    return QuadraticForm(
        grid=grid,
        alpha=alpha,
        interior=A,
        exterior_weights=w_ext,
        potential_mass=np.zeros(n),
    )


# --------------------------------------------------------------------------
# exterior tail
# --------------------------------------------------------------------------

def exterior_tail_weights(grid: Grid, alpha: float) -> np.ndarray:
    """Per-node weights realizing 2 int u^2(x) int_{|y|>R} |x-y|^(-1-2a) dy dx.

    The inner integral is [(R-x)^(-2a) + (R+x)^(-2a)]/(2a); the weight of
    node i is twice the exact integral of that density against the hat
    function at i (finite at the boundary for a < 1/2, and approximately
    2*h*density(x_i) well inside).
    """
    n = grid.n
    h = grid.spacing
    e1 = 1.0 - 2.0 * alpha
    e2 = 2.0 - 2.0 * alpha

    def ramp_integral(a: float, b: float, c: float) -> float:
        # int_a^b (tau - c) tau^(-2a) dtau, exact
        hi = b ** e2 / e2 - c * b ** e1 / e1
        lo = a ** e2 / e2 - c * a ** e1 / e1
        return hi - lo

    # T_i = int hat_i(x) (R - x)^(-2a) dx, with tau = R - x = h*(n-1-i)
    T = np.zeros(n)
    for i in range(n):
        d = h * (n - 1 - i)
        if i >= 1:  # piece x in [x_{i-1}, x_i], tau in [d, d+h]
            T[i] += -ramp_integral(d, d + h, d + h) / h
        if i <= n - 2:  # piece x in [x_i, x_{i+1}], tau in [d-h, d]
            T[i] += ramp_integral(d - h, d, d - h) / h
    # mirrored tail (R + x)^(-2a) is T reversed; factor 2/(2a) overall
    return (T + T[::-1]) / alpha


# --------------------------------------------------------------------------
# potential mass and norm evaluations
# --------------------------------------------------------------------------

def assemble_potential_mass(grid: Grid, V: np.ndarray) -> np.ndarray:
    """Diagonal weights of int V u^2 by lumped P1 quadrature (V must be > 0)."""
    V = np.asarray(V, dtype=float)
    if V.shape != (grid.n,):
        raise ParameterError("potential samples do not match the grid")
    bad = np.flatnonzero(~(V > 0.0))
    if bad.size:
        i = int(bad[0])
        raise HypothesisViolationError(
            f"potential must be strictly positive; V[{i}] = {V[i]} at x = {grid.nodes[i]}"
        )
    return V * grid.nodal_mass


def _check_state(form: QuadraticForm, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (form.grid.n,):
        raise ParameterError(
            f"state has length {u.shape}, grid has {form.grid.n} nodes"
        )
    return u


def seminorm_sq(form: QuadraticForm, u: np.ndarray) -> float:
    """Squared Gagliardo seminorm: interior quadratic form plus exterior tail."""
    u = _check_state(form, u)
    return float(u @ (form.interior @ u) + form.exterior_weights @ (u * u))


def norm_sq(form: QuadraticForm, u: np.ndarray) -> float:
    """Squared energy norm: seminorm plus the potential mass term."""
    u = _check_state(form, u)
    Gu = form.operator() @ u
    return float(u @ Gu)


def inner(form: QuadraticForm, u: np.ndarray, v: np.ndarray) -> float:
    """Bilinear pairing of the energy norm (polarization of ``norm_sq``)."""
    u = _check_state(form, u)
    v = _check_state(form, v)
    return float(u @ (form.operator() @ v))


def export_form_csv(form: QuadraticForm, directory) -> list[str]:
    """Write interior/exterior/potential entries as i,j,value triplet files."""
    import os

    paths = []
    tables = [
        ("interior.csv", form.interior, False),
        ("exterior.csv", form.exterior_weights, True),
        ("potential.csv", form.potential_mass, True),
    ]
    for name, data, diagonal in tables:
        path = os.path.join(str(directory), name)
        with open(path, "w") as fh:
            fh.write("i,j,value\n")
            if diagonal:
                for i, v in enumerate(data):
                    fh.write(f"{i},{i},{v:.17g}\n")
            else:
                rows, cols = np.nonzero(data)
                for i, j in zip(rows, cols):
                    fh.write(f"{i},{j},{data[i, j]:.17g}\n")
        paths.append(path)
    return paths
