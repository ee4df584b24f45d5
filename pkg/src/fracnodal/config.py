"""Run configuration: flat key=value files with command-line overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import ConfigError
from .nonlinearity import MODELS, critical_exponent
from .presets import POTENTIAL_PRESETS


@dataclass
class RunConfig:
    alpha: float = 0.4
    dim: int = 1
    radius: float = 10.0
    n: int = 801
    model: str = "odd_power"
    m: float = 4.0
    potential: str = "constant"
    potential_file: str | None = None
    projection_tol: float = 1e-10
    solver_tol: float = 1e-6
    beta_config: float = 1e-6
    max_iter: int = 3000
    seed_center_minus: float = -1.0
    seed_center_plus: float = 1.0
    seed_width: float = 0.5
    seed_amplitude: float = 1.0
    n_boundary: int = 256
    window_measure: float = 2.0
    quad_order: int = 16
    output_dir: str = "."

    def validate(self) -> "RunConfig":
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha", f"must lie in (0, 1), got {self.alpha}")
        if self.dim < 1:
            raise ConfigError("dim", f"must be a positive integer, got {self.dim}")
        if 2.0 * self.alpha >= self.dim:
            raise ConfigError(
                "alpha", f"constraint N > 2*alpha violated (N={self.dim}, alpha={self.alpha})"
            )
        if self.dim != 1:
            raise ConfigError("dim", "only dim = 1 is assembled")
        if self.radius <= 0.0:
            raise ConfigError("radius", f"must be positive, got {self.radius}")
        if self.n < 3 or self.n % 2 == 0:
            raise ConfigError("n", f"must be an odd integer >= 3, got {self.n}")
        if self.model not in MODELS:
            raise ConfigError("model", f"must be one of {MODELS}, got '{self.model}'")
        top = critical_exponent(self.dim, self.alpha)
        if not 2.0 < self.m < top:
            raise ConfigError("m", f"must lie in (2, {top:g}), got {self.m}")
        if self.potential not in POTENTIAL_PRESETS:
            raise ConfigError(
                "potential", f"must be one of {POTENTIAL_PRESETS}, got '{self.potential}'"
            )
        for key in ("projection_tol", "solver_tol", "beta_config"):
            if getattr(self, key) <= 0.0:
                raise ConfigError(key, f"must be positive, got {getattr(self, key)}")
        if self.max_iter < 1:
            raise ConfigError("max_iter", f"must be >= 1, got {self.max_iter}")
        for key in ("seed_center_minus", "seed_center_plus"):
            c = getattr(self, key)
            if not -self.radius < c < self.radius:
                raise ConfigError(key, f"center {c} outside (-{self.radius}, {self.radius})")
        if self.seed_width <= 0.0:
            raise ConfigError("seed_width", f"must be positive, got {self.seed_width}")
        if self.seed_amplitude == 0.0:
            raise ConfigError("seed_amplitude", "must be nonzero")
        if self.n_boundary < 64:
            raise ConfigError("n_boundary", f"must be >= 64, got {self.n_boundary}")
        if self.window_measure <= 0.0 or self.window_measure >= 2.0 * self.radius:
            raise ConfigError(
                "window_measure", f"must lie in (0, {2 * self.radius}), got {self.window_measure}"
            )
        if self.quad_order < 4:
            raise ConfigError("quad_order", f"must be >= 4, got {self.quad_order}")
        return self


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "str | None":
            return None if raw.lower() in ("", "none") else raw
        return raw
    except ValueError as exc:
        raise ConfigError(key, f"cannot parse '{raw}' as {kind}") from exc


def parse_config_file(path: str) -> dict:
    """Parse a flat key=value file ('#' starts a comment)."""
    entries: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(
                        "config_file", f"{path}:{lineno}: expected key=value, got '{line}'"
                    )
                key, value = line.split("=", 1)
                entries[key.strip()] = value
    except OSError as exc:
        raise ConfigError("config_file", f"cannot read {path}: {exc}") from exc
    return entries


def build_config(path: str | None = None, overrides: list[str] | None = None) -> RunConfig:
    """Merge file entries and key=value override strings into a validated config."""
    merged: dict[str, str] = {}
    if path is not None:
        merged.update(parse_config_file(path))
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError("override", f"expected key=value, got '{item}'")
        key, value = item.split("=", 1)
        merged[key.strip()] = value
    cfg = RunConfig()
    for key, raw in merged.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(key, "unknown configuration key")
        setattr(cfg, key, _coerce(key, raw))
    return cfg.validate()
