"""Sample-based audit of the standing conditions on (V, K) and on f.

Every check works on finite samples, so asymptotic conditions are reported
as *trends* over the outermost sampled decades or radii: a clearly
favorable trend passes, a clearly adverse one is flagged with a witness,
and anything sampling cannot decide is marked not-checkable.  Conditions
quantified over arbitrary sets (the vanishing-tail condition) are
under-approximated by sliding interval windows.

For one-sided nonlinearities (zero on an entire sign side) the strict
monotonicity and growth conditions are vacuous on the inactive side; the
checks record that side as inactive instead of flagging it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import ParameterError
from .nonlinearity import NonlinearitySpec, critical_exponent, validate_exponent

PASS = "pass"
FLAGGED = "flagged"
NOT_CHECKABLE = "not-checkable"

_REL_TOL = 1e-9


@dataclass(frozen=True)
class ConditionVerdict:
    name: str
    status: str
    detail: str
    witnesses: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "detail": self.detail,
            "witnesses": list(self.witnesses),
        }


@dataclass(frozen=True)
class HypothesisReport:
    conditions: dict
    route_claimed: str
    route_observed: str

    def as_dict(self) -> dict:
        return {
            "conditions": {k: v.as_dict() for k, v in self.conditions.items()},
            "route_claimed": self.route_claimed,
            "route_observed": self.route_observed,
        }

    def table(self) -> str:
        lines = [f"{'condition':<28} {'status':<14} detail"]
        for key, v in self.conditions.items():
            lines.append(f"{key:<28} {v.status:<14} {v.detail}")
        lines.append(
            f"{'ratio route':<28} claimed={self.route_claimed} observed={self.route_observed}"
        )
        return "\n".join(lines)


def _running_max_growing(x: np.ndarray, values: np.ndarray, margin: float = 1.05):
    """Max over nested radius fractions; report if it keeps growing outward."""
    R = float(np.max(np.abs(x)))
    fractions = (0.25, 0.5, 0.75, 1.0)
    maxima = []
    for f in fractions:
        inside = np.abs(x) <= f * R + 1e-15
        maxima.append(float(np.max(values[inside])))
    growing = all(b >= a * margin for a, b in zip(maxima, maxima[1:]))
    return growing, fractions, maxima


def check_positivity(x: np.ndarray, V: np.ndarray, K: np.ndarray) -> ConditionVerdict:
    """V > 0, K > 0 everywhere, and K bounded (no outward growth of its max)."""
    x = np.asarray(x, dtype=float)
    V = np.asarray(V, dtype=float)
    K = np.asarray(K, dtype=float)
    witnesses = []
    for name, arr in (("V", V), ("K", K)):
        bad = np.flatnonzero(~(arr > 0.0))
        for i in bad[:3]:
            witnesses.append({"condition": f"{name} > 0", "x": float(x[i]), "value": float(arr[i])})
    if witnesses:
        return ConditionVerdict("positivity", FLAGGED, "nonpositive samples found", witnesses)
    growing, fractions, maxima = _running_max_growing(x, K)
    if growing:
        witnesses = [
            {"condition": "K bounded", "radius_fraction": f, "running_max": m}
            for f, m in zip(fractions, maxima)
        ]
        return ConditionVerdict(
            "positivity", FLAGGED, "max of K keeps growing with the radius", witnesses
        )
    return ConditionVerdict("positivity", PASS, "V, K positive; K max saturates")


def check_vanishing_tail(
    x: np.ndarray,
    K: np.ndarray,
    window_measure: float,
    radii: list[float] | None = None,
) -> ConditionVerdict:
    """Sup over sliding windows of int_{window, |x|>r} K, per radius r.

    Passes when the window sups decrease strictly toward zero as r grows
    (trailing exact zeros count as vanished); interval windows are an
    under-approximation of arbitrary measurable sets of the same measure.
    """
    x = np.asarray(x, dtype=float)
    K = np.asarray(K, dtype=float)
    R = float(np.max(np.abs(x)))
    h = float(x[1] - x[0])
    if window_measure <= 0.0 or window_measure >= 2.0 * R:
        raise ParameterError(
            f"window measure must lie in (0, {2 * R}), got {window_measure}"
        )
    if radii is None:
        radii = [0.25 * R, 0.5 * R, 0.75 * R, 0.9 * R]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ParameterError("radii must be strictly increasing")

    w_nodes = max(1, int(round(window_measure / h)))
    sups = []
    argmax_pos = []
    for r in radii:
        masked = np.where(np.abs(x) > r, K, 0.0)
        cell = 0.5 * h * (masked[:-1] + masked[1:])
        csum = np.concatenate([[0.0], np.cumsum(cell)])
        window_mass = csum[w_nodes:] - csum[:-w_nodes]
        k = int(np.argmax(window_mass))
        sups.append(float(window_mass[k]))
        argmax_pos.append(float(x[k]))

    # trailing exact zeros: the tail mass has vanished
    nz = [s for s in sups if s > 1e-14]
    if not nz:
        return ConditionVerdict(
            "vanishing_tail", PASS, "window masses vanish at every sampled radius"
        )
    if len(nz) < len(sups):
        decreasing = all(b < a * (1.0 - _REL_TOL) for a, b in zip(nz, nz[1:]))
        if decreasing or len(nz) == 1:
            return ConditionVerdict(
                "vanishing_tail", PASS, "window masses reach exact zero beyond the support"
            )
    decreasing = all(b < a * (1.0 - _REL_TOL) for a, b in zip(sups, sups[1:]))
    if decreasing:
        return ConditionVerdict(
            "vanishing_tail",
            PASS,
            f"window sups decrease across radii: {[f'{s:.3e}' for s in sups]}",
        )
    k = next(i for i in range(len(sups) - 1) if sups[i + 1] >= sups[i] * (1.0 - _REL_TOL))
    witness = {
        "radius": float(radii[k + 1]),
        "window_start": argmax_pos[k + 1],
        "window_measure": window_measure,
        "mass": sups[k + 1],
        "previous_mass": sups[k],
    }
    return ConditionVerdict(
        "vanishing_tail", FLAGGED, "window masses do not decay with the radius", [witness]
    )


def check_bounded_ratio(x: np.ndarray, V: np.ndarray, K: np.ndarray) -> ConditionVerdict:
    """K/V bounded: the running max of the ratio must not grow outward."""
    V = np.asarray(V, dtype=float)
    if np.any(~(V > 0.0)):
        raise ParameterError("positivity must hold before ratio checks")
    ratio = np.asarray(K, dtype=float) / V
    growing, fractions, maxima = _running_max_growing(np.asarray(x, dtype=float), ratio)
    if growing:
        witnesses = [
            {"radius_fraction": f, "running_max": m} for f, m in zip(fractions, maxima)
        ]
        return ConditionVerdict(
            "bounded_ratio", FLAGGED, "K/V keeps growing with the radius", witnesses
        )
    return ConditionVerdict(
        "bounded_ratio", PASS, f"K/V running max saturates at {maxima[-1]:.6g}"
    )


def check_decaying_ratio(
    x: np.ndarray,
    V: np.ndarray,
    K: np.ndarray,
    m: float,
    alpha: float,
    dim: int = 1,
    bins: int = 6,
) -> ConditionVerdict:
    """K / V^((2*_a - m)/(2*_a - 2)) -> 0: per-shell maxima must decrease outward."""
    validate_exponent(m, dim, alpha)
    top = critical_exponent(dim, alpha)
    expo = (top - m) / (top - 2.0)
    x = np.asarray(x, dtype=float)
    V = np.asarray(V, dtype=float)
    if np.any(~(V > 0.0)):
        raise ParameterError("positivity must hold before ratio checks")
    ratio = np.asarray(K, dtype=float) / V ** expo
    R = float(np.max(np.abs(x)))
    edges = np.linspace(0.0, R, bins + 1)
    maxima = []
    for a, b in zip(edges[:-1], edges[1:]):
        shell = (np.abs(x) >= a) & (np.abs(x) <= b + 1e-15)
        maxima.append(float(np.max(ratio[shell])))
    decreasing = all(b < a * (1.0 - _REL_TOL) for a, b in zip(maxima, maxima[1:]))
    if decreasing:
        return ConditionVerdict(
            "decaying_ratio",
            PASS,
            f"shell maxima decrease outward: {[f'{v:.3e}' for v in maxima]}",
        )
    k = next(
        i for i in range(len(maxima) - 1) if maxima[i + 1] >= maxima[i] * (1.0 - _REL_TOL)
    )
    witness = {
        "shell": (float(edges[k + 1]), float(edges[k + 2])),
        "max_ratio": maxima[k + 1],
        "previous_max": maxima[k],
        "exponent": expo,
    }
    return ConditionVerdict(
        "decaying_ratio", FLAGGED, "weighted ratio does not decay outward", [witness]
    )


# --------------------------------------------------------------------------
# nonlinearity conditions
# --------------------------------------------------------------------------

def default_t_grid(t_max: float = 100.0, per_decade: int = 8) -> np.ndarray:
    """Signed log-spaced grid over [-t_max, t_max] excluding 0."""
    decades = np.log10(t_max) - (-6.0)
    pos = np.logspace(-6.0, np.log10(t_max), int(round(decades * per_decade)))
    return np.concatenate([-pos[::-1], pos])


def _side_values(fn, grid: np.ndarray, side: int) -> tuple[np.ndarray, np.ndarray]:
    t = grid[grid > 0.0] if side > 0 else grid[grid < 0.0]
    t = np.sort(t)
    return t, np.asarray(fn(t), dtype=float)


def _strictly_monotone(values: np.ndarray, increasing: bool) -> int | None:
    """Index of the first violation of strict monotonicity, else None."""
    diffs = np.diff(values)
    scale = np.maximum(np.abs(values[:-1]), 1e-300)
    ok = diffs > _REL_TOL * scale if increasing else diffs < -_REL_TOL * scale
    bad = np.flatnonzero(~ok)
    return int(bad[0]) if bad.size else None


def _sided_monotone_verdict(
    name: str, fn, grid: np.ndarray, increasing_pos: bool, increasing_neg: bool
) -> ConditionVerdict:
    """Strict monotonicity per sign side, with identically-zero sides vacuous."""
    witnesses = []
    inactive = []
    for side, increasing in ((1, increasing_pos), (-1, increasing_neg)):
        t, vals = _side_values(fn, grid, side)
        if np.all(vals == 0.0):
            inactive.append("positive" if side > 0 else "negative")
            continue
        bad = _strictly_monotone(vals, increasing)
        if bad is not None:
            witnesses.append(
                {
                    "side": "positive" if side > 0 else "negative",
                    "t": (float(t[bad]), float(t[bad + 1])),
                    "values": (float(vals[bad]), float(vals[bad + 1])),
                }
            )
    if witnesses:
        return ConditionVerdict(name, FLAGGED, "strict monotonicity fails", witnesses)
    detail = "strictly monotone on sampled grid"
    if inactive:
        detail += f" ({' and '.join(inactive)} side inactive)"
    return ConditionVerdict(name, PASS, detail)


def _trend_verdict(
    name: str,
    t: np.ndarray,
    ratio: np.ndarray,
    want: str,
    where: str,
) -> ConditionVerdict:
    """Compare the outer/inner two decades of |ratio| for a decay/growth trend."""
    mask = ratio != 0.0
    if not np.any(mask):
        return ConditionVerdict(name, PASS, f"ratio identically zero ({where} side inactive)")
    t = np.abs(t)
    hi = np.max(t)
    if where == "infinity":
        outer = np.abs(ratio[(t > hi / 10.0)])
        inner = np.abs(ratio[(t > hi / 100.0) & (t <= hi / 10.0)])
    else:
        lo = np.min(t)
        outer = np.abs(ratio[t < 10.0 * lo])
        inner = np.abs(ratio[(t >= 10.0 * lo) & (t < 100.0 * lo)])
    a = float(np.max(inner)) if inner.size else 0.0
    b = float(np.max(outer)) if outer.size else 0.0
    if want == "decay":
        if b <= 0.5 * a:
            return ConditionVerdict(name, PASS, f"trend: ratio falls {a:.3e} -> {b:.3e}")
        if b >= 2.0 * a:
            return ConditionVerdict(
                name, FLAGGED, "ratio grows where it should decay",
                [{"inner_max": a, "outer_max": b}],
            )
        return ConditionVerdict(
            name, NOT_CHECKABLE, f"trend ambiguous at sampled range ({a:.3e} vs {b:.3e})"
        )
    if want == "growth":
        if b >= 2.0 * a:
            return ConditionVerdict(name, PASS, f"trend: ratio grows {a:.3e} -> {b:.3e}")
        if b <= 0.5 * a:
            return ConditionVerdict(
                name, FLAGGED, "ratio decays where it should grow",
                [{"inner_max": a, "outer_max": b}],
            )
        return ConditionVerdict(
            name, NOT_CHECKABLE, f"trend ambiguous at sampled range ({a:.3e} vs {b:.3e})"
        )
    if b <= 1.5 * a or b < 1e-12:
        return ConditionVerdict(name, PASS, f"trend: ratio stays bounded ({a:.3e} -> {b:.3e})")
    if b >= 10.0 * a:
        return ConditionVerdict(
            name, FLAGGED, "ratio blows up where it should stay bounded",
            [{"inner_max": a, "outer_max": b}],
        )
    return ConditionVerdict(
        name, NOT_CHECKABLE, f"trend ambiguous at sampled range ({a:.3e} vs {b:.3e})"
    )


def check_nonlinearity(
    f,
    F=None,
    mode: str = "bounded_ratio",
    m: float = 4.0,
    alpha: float = 0.4,
    dim: int = 1,
    t_grid: np.ndarray | None = None,
) -> dict:
    """Verdict bundle for the growth and monotonicity conditions on f.

    ``f`` is a vectorized callable (or a :class:`NonlinearitySpec`); ``F``
    defaults to numerical integration of f from 0.  ``mode`` selects which
    near-zero condition applies: 'bounded_ratio' requires f(t)/|t| -> 0,
    'decaying_ratio' requires f(t)/|t|^(m-1) bounded.
    """
    if isinstance(f, NonlinearitySpec):
        spec = f
        f = spec.f
        F = spec.F
    if F is None:
        f_scalar = f

        def F(ts):
            ts = np.atleast_1d(np.asarray(ts, dtype=float))
            out = np.array(
                [integrate.quad(lambda q: float(f_scalar(q)), 0.0, float(b), limit=200)[0] for b in ts]
            )
            return out

    if mode not in ("bounded_ratio", "decaying_ratio"):
        raise ParameterError(f"unknown mode '{mode}'")
    validate_exponent(m, dim, alpha)
    top = critical_exponent(dim, alpha)
    grid = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if np.any(grid == 0.0):
        raise ParameterError("t grid must exclude 0")

    fv = np.asarray(f(grid), dtype=float)
    Fv = np.asarray(F(grid), dtype=float)
    out: dict[str, ConditionVerdict] = {}

    if mode == "bounded_ratio":
        out["near_zero_decay"] = _trend_verdict(
            "near_zero_decay", grid, fv / np.abs(grid), "decay", "zero"
        )
    else:
        out["near_zero_bounded"] = _trend_verdict(
            "near_zero_bounded", grid, fv / np.abs(grid) ** (m - 1.0), "bounded", "zero"
        )
    out["subcritical_growth"] = _trend_verdict(
        "subcritical_growth", grid, fv / np.abs(grid) ** (top - 1.0), "decay", "infinity"
    )
    out["superquadratic_primitive"] = _trend_verdict(
        "superquadratic_primitive", grid, Fv / grid ** 2, "growth", "infinity"
    )
    out["slope_ratio_monotone"] = _sided_monotone_verdict(
        "slope_ratio_monotone",
        lambda t: np.asarray(f(t), dtype=float) / np.abs(t),
        grid,
        increasing_pos=True,
        increasing_neg=True,
    )
    out["energy_gap_monotone"] = _sided_monotone_verdict(
        "energy_gap_monotone",
        lambda t: 0.5 * np.asarray(f(t), dtype=float) * t - np.asarray(F(t), dtype=float),
        grid,
        increasing_pos=True,
        increasing_neg=False,
    )
    return out


def validate_pair(
    x: np.ndarray,
    V: np.ndarray,
    K: np.ndarray,
    spec: NonlinearitySpec,
    m: float,
    alpha: float,
    dim: int = 1,
    window_measure: float = 2.0,
    route_claimed: str = "auto",
) -> HypothesisReport:
    """Run every coefficient and nonlinearity check and summarize the route.

    The ratio route records which of the two alternative coefficient
    conditions (bounded K/V, or the decaying weighted ratio) the samples
    support; ``route_claimed`` may assert one up front.
    """
    conditions: dict[str, ConditionVerdict] = {}
    conditions["positivity"] = check_positivity(x, V, K)
    conditions["vanishing_tail"] = check_vanishing_tail(x, K, window_measure)
    if conditions["positivity"].status == PASS:
        conditions["bounded_ratio"] = check_bounded_ratio(x, V, K)
        conditions["decaying_ratio"] = check_decaying_ratio(x, V, K, m, alpha, dim)
    else:
        conditions["bounded_ratio"] = ConditionVerdict(
            "bounded_ratio", NOT_CHECKABLE, "requires positivity"
        )
        conditions["decaying_ratio"] = ConditionVerdict(
            "decaying_ratio", NOT_CHECKABLE, "requires positivity"
        )
    if conditions["bounded_ratio"].status == PASS:
        observed = "bounded_ratio"
        mode = "bounded_ratio"
    elif conditions["decaying_ratio"].status == PASS:
        observed = "decaying_ratio"
        mode = "decaying_ratio"
    else:
        observed = "none"
        mode = "bounded_ratio"
    claimed = observed if route_claimed == "auto" else route_claimed
    conditions.update(check_nonlinearity(spec, mode=mode, m=m, alpha=alpha, dim=dim))
    return HypothesisReport(
        conditions=conditions, route_claimed=claimed, route_observed=observed
    )
