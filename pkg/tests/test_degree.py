"""Winding numbers of planar maps and the minimizer certificate."""

import numpy as np
import pytest

from fracnodal import (
    DegenerateBoundaryError,
    ParameterError,
    Rectangle,
    ResolutionError,
    certify_minimizer,
    winding_number,
)
from fracnodal.degree import UNIT_BOX

BOX = Rectangle(0.5, 1.5, 0.5, 1.5)


class TestWindingNumber:
    def test_shifted_identity(self):
        assert winding_number(lambda t, s: (t - 1.0, s - 1.0), BOX) == 1

    def test_zero_free_constant(self):
        assert winding_number(lambda t, s: (np.ones_like(t), np.ones_like(s)), BOX) == 0

    def test_warped_zero_with_positive_jacobian(self):
        fn = lambda t, s: ((t - 1.0) * np.exp(s), (s - 1.0) * (2.0 + t))
        assert winding_number(fn, BOX) == 1
        # brute-force check: the jacobian at the unique zero has positive sign
        eps = 1e-6
        j = np.array(
            [
                [(fn(1 + eps, 1.0)[0] - fn(1 - eps, 1.0)[0]) / (2 * eps),
                 (fn(1.0, 1 + eps)[0] - fn(1.0, 1 - eps)[0]) / (2 * eps)],
                [(fn(1 + eps, 1.0)[1] - fn(1 - eps, 1.0)[1]) / (2 * eps),
                 (fn(1.0, 1 + eps)[1] - fn(1.0, 1 - eps)[1]) / (2 * eps)],
            ]
        )
        assert np.sign(np.linalg.det(j)) == 1.0

    def test_negative_degree_orientation_reversal(self):
        assert winding_number(lambda t, s: (1.0 - t, s - 1.0), BOX) == -1

    def test_product_map_matches_jacobian_sign_rule(self):
        # decoupled map (a(t), b(s)): degree = sign(a') * sign(b') at the zero
        a = lambda t: 2.0 * (1.1 - t)
        b = lambda s: np.tanh(3.0 * (s - 0.9))
        degree = winding_number(lambda t, s: (a(t), b(s)), BOX)
        eps = 1e-6
        sign_a = np.sign(a(1.1 + eps) - a(1.1 - eps))
        sign_b = np.sign(b(0.9 + eps) - b(0.9 - eps))
        assert degree == int(sign_a * sign_b) == -1

    def test_stable_under_refinement(self):
        fn = lambda t, s: ((t - 1.0) * np.exp(s), (s - 1.0) * (2.0 + t))
        assert winding_number(fn, BOX, 256) == winding_number(fn, BOX, 512)

    def test_rejects_zero_on_boundary(self):
        rect = Rectangle(1.0, 2.0, 1.0, 2.0)  # zero of the map sits at a corner
        with pytest.raises(DegenerateBoundaryError):
            winding_number(lambda t, s: (t - 1.0, s - 1.0), rect)

    def test_rejects_unresolvable_angle_jump(self):
        # 2.5-radian angle jump inside a window far narrower than the sample
        # spacing at the refinement cap: some step always exceeds pi/2
        s0 = 1.0 + np.pi * 1e-4
        from scipy.special import expit

        theta = lambda s: 2.5 * expit((s - s0) / 1e-9)
        fn = lambda t, s: (np.cos(theta(s)), np.sin(theta(s)))
        with pytest.raises(ResolutionError):
            winding_number(fn, BOX)

    def test_rejects_too_few_samples(self):
        with pytest.raises(ParameterError):
            winding_number(lambda t, s: (t, s), BOX, n_boundary=16)

    def test_rectangle_validation(self):
        with pytest.raises(ParameterError):
            Rectangle(0.0, 1.0, 0.5, 1.5)
        with pytest.raises(ParameterError):
            Rectangle(1.0, 0.5, 0.5, 1.5)


class TestCertificate:
    def test_rejects_state_outside_nodal_set(self, problem_small, rng):
        u = rng.standard_normal(problem_small.grid.n)
        with pytest.raises(ParameterError):
            certify_minimizer(problem_small, u, UNIT_BOX)

    def test_certificate_on_projected_state_is_one(self, problem_small, rng):
        # nodal-projected states satisfy the membership residuals exactly
        # enough for the certificate even before the full solve
        from fracnodal import nodal_projection, split

        u = rng.standard_normal(problem_small.grid.n)
        u[0] -= 1.0
        u[-1] += 1.0
        scales = nodal_projection(problem_small, u)
        up, um = split(u)
        w = scales.t_plus * up + scales.s_minus * um
        assert certify_minimizer(problem_small, w, UNIT_BOX) == 1
