"""Model nonlinearities f with antiderivative F and growth exponent m.

Three models are supported:

  * ``positive_power``: f(t) = max(t, 0)^m, active on positive values only;
  * ``odd_power``:      f(t) = |t|^(m-2) t, odd, active on both signs;
  * ``log_model``:      f(t) = log(2) * max(t, 0)^m for t <= 1 and
                        t*log(1+t) for t > 1, continuous at t = 1.

All satisfy f(0) = 0 and F >= 0.  The admissible exponent window is
(2, 2N/(N-2*alpha)) for the configured dimension and fractional order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

MODELS = ("positive_power", "odd_power", "log_model")

_LOG2 = float(np.log(2.0))


def critical_exponent(dim: int, alpha: float) -> float:
    """Upper Sobolev exponent 2N/(N - 2*alpha) of the energy space."""
    if 2.0 * alpha >= dim:
        raise ParameterError(f"need dim > 2*alpha (dim={dim}, alpha={alpha})")
    return 2.0 * dim / (dim - 2.0 * alpha)


def validate_exponent(m: float, dim: int, alpha: float) -> None:
    """Check m in (2, 2N/(N-2*alpha)); raise ParameterError outside."""
    top = critical_exponent(dim, alpha)
    if not 2.0 < m < top:
        raise ParameterError(f"exponent m={m} outside (2, {top}) for dim={dim}, alpha={alpha}")


@dataclass(frozen=True)
class NonlinearitySpec:
    """One of the supported source models, with vectorized f and F."""

    model: str
    m: float

    def __post_init__(self):
        if self.model not in MODELS:
            raise ParameterError(f"unknown nonlinearity model '{self.model}'")
        if not self.m > 2.0:
            raise ParameterError(f"exponent m must exceed 2, got {self.m}")

    def f(self, t):
        t = np.asarray(t, dtype=float)
        m = self.m
        if self.model == "positive_power":
            return np.maximum(t, 0.0) ** m
        if self.model == "odd_power":
            return np.abs(t) ** (m - 2.0) * t
        low = _LOG2 * np.maximum(np.minimum(t, 1.0), 0.0) ** m
        high = np.where(t > 1.0, t * np.log1p(np.maximum(t, 1.0)), 0.0)
        return np.where(t > 1.0, high, low)

    def F(self, t):
        t = np.asarray(t, dtype=float)
        m = self.m
        if self.model == "positive_power":
            return np.maximum(t, 0.0) ** (m + 1.0) / (m + 1.0)
        if self.model == "odd_power":
            return np.abs(t) ** m / m
        low = _LOG2 * np.maximum(np.minimum(t, 1.0), 0.0) ** (m + 1.0) / (m + 1.0)
        tc = np.maximum(t, 1.0)
        # exact primitive of tau*log(1+tau) from 1 to t
        high = (
            _LOG2 / (m + 1.0)
            + 0.5 * (tc * tc - 1.0) * np.log1p(tc)
            - 0.25 * (tc - 1.0) ** 2
        )
        return np.where(t > 1.0, high, low)
