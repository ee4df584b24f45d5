"""Brouwer degree of planar maps by boundary winding, and the criticality certificate.

The degree of a map on a rectangle equals the winding number of its
boundary trace around the origin.  It is computed from wrapped angular
increments over a sampled, positively oriented boundary loop; sampling is
doubled until no increment exceeds pi/2, so an under-resolved contour is
refused rather than silently mis-counted.

For a converged sign-changing minimizer the section gradient
(t, s) -> (<J'(t u+ + s u-), u+>, <J'(t u+ + s u-), u->) vanishes only at
the unit scales inside [1/2, 3/2]^2, where the section has a nondegenerate
maximum; the certificate checks that its winding there equals one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBoundaryError, ParameterError, ResolutionError
from .functional import Problem
from .nehari import NodalSection, membership

_MIN_BOUNDARY = 64
_MIN_MAGNITUDE = 1e-10
_MAX_REFINEMENTS = 8


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle with strictly positive corners."""

    t_lo: float
    t_hi: float
    s_lo: float
    s_hi: float

    def __post_init__(self):
        if not (0.0 < self.t_lo < self.t_hi and 0.0 < self.s_lo < self.s_hi):
            raise ParameterError(
                f"rectangle bounds must satisfy 0 < lo < hi, got {self}"
            )


UNIT_BOX = Rectangle(0.5, 1.5, 0.5, 1.5)


def _boundary_loop(rect: Rectangle, n: int) -> tuple[np.ndarray, np.ndarray]:
    """n points along the positively oriented boundary, uniform in arc length."""
    w = rect.t_hi - rect.t_lo
    h = rect.s_hi - rect.s_lo
    perimeter = 2.0 * (w + h)
    arc = np.arange(n) * (perimeter / n)
    t = np.empty(n)
    s = np.empty(n)
    # bottom, right, top, left
    seg = np.minimum(arc, w)
    t[:] = rect.t_lo + seg
    s[:] = rect.s_lo
    m = arc > w
    t[m] = rect.t_hi
    s[m] = rect.s_lo + np.minimum(arc[m] - w, h)
    m = arc > w + h
    t[m] = rect.t_hi - np.minimum(arc[m] - w - h, w)
    s[m] = rect.s_hi
    m = arc > 2.0 * w + h
    t[m] = rect.t_lo
    s[m] = rect.s_hi - (arc[m] - 2.0 * w - h)
    return t, s


def winding_number(map_fn, rect: Rectangle, n_boundary: int = 256) -> int:
    """Winding of ``map_fn`` around the origin along the rectangle boundary.

    ``map_fn(t, s)`` must accept equal-length coordinate arrays and return
    the two component arrays.  Raises if the map (numerically) vanishes on
    the contour, or if refinement cannot bring every angular step below
    pi/2.
    """
    if n_boundary < _MIN_BOUNDARY:
        raise ParameterError(f"need at least {_MIN_BOUNDARY} boundary samples")
    n = int(n_boundary)
    for _ in range(_MAX_REFINEMENTS + 1):
        t, s = _boundary_loop(rect, n)
        f1, f2 = map_fn(t, s)
        f1 = np.asarray(f1, dtype=float)
        f2 = np.asarray(f2, dtype=float)
        mag = np.hypot(f1, f2)
        if np.min(mag) < _MIN_MAGNITUDE:
            k = int(np.argmin(mag))
            raise DegenerateBoundaryError(
                f"map magnitude {mag[k]:.3e} at boundary point (t={t[k]}, s={s[k]})"
            )
        ang = np.arctan2(f2, f1)
        steps = np.diff(ang, append=ang[:1])
        steps = (steps + np.pi) % (2.0 * np.pi) - np.pi
        if np.max(np.abs(steps)) <= 0.5 * np.pi:
            total = float(np.sum(steps))
            return int(round(total / (2.0 * np.pi)))
        n *= 2
    raise ResolutionError(
        f"angular steps exceed pi/2 even at {n // 2} boundary samples"
    )


def certify_minimizer(
    problem: Problem,
    u: np.ndarray,
    rect: Rectangle = UNIT_BOX,
    n_boundary: int = 256,
    membership_tol: float = 1e-5,
) -> int:
    """Winding of the section gradient of ``u`` on ``rect`` (expected 1).

    ``u`` must already pass the nodal membership check; the certificate is
    only meaningful at a converged sign-changing critical point.
    """
    report = membership(problem, u, tol=membership_tol)
    if not report.in_nodal_set:
        raise ParameterError(
            "state does not satisfy the nodal membership residuals; "
            "certify only converged sign-changing minimizers"
        )
    section = NodalSection(problem, u)
    return winding_number(section.grad, rect, n_boundary)
