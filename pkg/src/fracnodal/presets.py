"""Built-in coefficient pairs (V, K) and seed families.

The slowly decaying tail 1/log(2 + |x|) and its bump-decorated variant are
the stock examples of positive coefficients vanishing at infinity; the bump
family places disjoint tents of height 1 at the positive integers with
geometrically shrinking mass 2^-n.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, HypothesisViolationError

POTENTIAL_PRESETS = ("constant", "log_tail", "log_tail_with_bumps", "from_file")


def log_tail(x: np.ndarray) -> np.ndarray:
    return 1.0 / np.log(2.0 + np.abs(x))


def bump_family(x: np.ndarray, count: int = 12) -> np.ndarray:
    """Disjoint tents centered at n = 1..count, height 1, area 2^-n."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for n in range(1, count + 1):
        half_width = 2.0 ** (-n)
        out += np.maximum(0.0, 1.0 - np.abs(x - n) / half_width)
    return out


def powered_log_tail(x: np.ndarray, exponent: float) -> np.ndarray:
    """log tail raised to a power (used to build decaying-ratio pairs)."""
    return log_tail(x) ** exponent


def load_potential_csv(path: str, nodes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Read x,V,K rows and check they match the grid nodes."""
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError("potential_file", f"cannot read {path}: {exc}") from exc
    if data.shape[1] != 3:
        raise ConfigError("potential_file", f"expected 3 columns x,V,K in {path}")
    if data.shape[0] != nodes.size or not np.allclose(data[:, 0], nodes, atol=1e-10):
        raise ConfigError(
            "potential_file", f"x column of {path} does not match the configured grid"
        )
    return data[:, 1], data[:, 2]


def potential_pair(preset: str, nodes: np.ndarray, path: str | None = None):
    """Nodal samples (V, K) for a named preset."""
    if preset == "constant":
        ones = np.ones_like(nodes)
        return ones, ones.copy()
    if preset == "log_tail":
        tail = log_tail(nodes)
        return tail, tail.copy()
    if preset == "log_tail_with_bumps":
        vals = bump_family(nodes) + log_tail(nodes)
        return vals, vals.copy()
    if preset == "from_file":
        if path is None:
            raise ConfigError("potential_file", "required when potential = from_file")
        V, K = load_potential_csv(path, nodes)
        if np.any(V <= 0.0) or np.any(K <= 0.0):
            raise HypothesisViolationError(
                f"potential file {path} contains nonpositive V or K samples"
            )
        return V, K
    raise ConfigError("potential", f"unknown preset '{preset}'")


def seed_family(grid, width: float, amplitude: float) -> list[np.ndarray]:
    """Qualitatively distinct starting profiles for multistart runs."""
    x = grid.nodes
    w2 = width * width
    bump = amplitude * np.exp(-(x * x) / w2)
    pair = amplitude * (
        np.exp(-((x - 1.0) ** 2) / w2) - np.exp(-((x + 1.0) ** 2) / w2)
    )
    triple = amplitude * (
        np.exp(-((x + 2.0) ** 2) / w2)
        - np.exp(-(x * x) / w2)
        + np.exp(-((x - 2.0) ** 2) / w2)
    )
    return [bump, -bump, pair, triple]
