"""Shared fixtures: small assembled problems reused across the suite."""

import zlib

import numpy as np
import pytest

from fracnodal import (
    NonlinearitySpec,
    Problem,
    assemble_gagliardo,
    assemble_potential_mass,
    build_grid,
)

ALPHA = 0.4


def make_problem(radius=8.0, n=81, alpha=ALPHA, model="odd_power", m=4.0, V=None, K=None):
    grid = build_grid(radius, n)
    if V is None:
        V = np.ones(grid.n)
    if K is None:
        K = np.ones(grid.n)
    form = assemble_gagliardo(grid, alpha).with_potential(assemble_potential_mass(grid, V))
    return Problem(form, NonlinearitySpec(model, m), K)


@pytest.fixture(scope="session")
def problem_small():
    """Constant coefficients, odd power, n=81: cheap enough for everything."""
    return make_problem()


@pytest.fixture(scope="session")
def problem_medium():
    """Constant coefficients at n=161 for solver flows."""
    return make_problem(n=161)


@pytest.fixture()
def rng(request):
    # deterministic per test and independent of execution order
    seed = zlib.crc32(request.node.name.encode())
    return np.random.default_rng(20240817 + seed)


def random_sign_changing(problem, rng, scale=1.0):
    """Random state guaranteed to carry both signs."""
    n = problem.grid.n
    while True:
        u = scale * rng.standard_normal(n)
        if np.any(u > 1e-3) and np.any(u < -1e-3):
            return u
