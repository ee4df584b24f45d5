"""Sample-based audit of coefficient and nonlinearity conditions."""

import numpy as np
import pytest

from fracnodal import NonlinearitySpec, ParameterError
from fracnodal.hypotheses import (
    FLAGGED,
    PASS,
    check_bounded_ratio,
    check_decaying_ratio,
    check_nonlinearity,
    check_positivity,
    check_vanishing_tail,
    validate_pair,
)
from fracnodal.presets import bump_family, log_tail, powered_log_tail

X = np.linspace(-20.0, 20.0, 1601)


@pytest.fixture(scope="module")
def paper_pair():
    vals = bump_family(X) + log_tail(X)
    return vals, vals.copy()


class TestPositivity:
    def test_paper_pair_passes(self, paper_pair):
        V, K = paper_pair
        assert check_positivity(X, V, K).status == PASS

    def test_zero_sample_flagged_with_witness(self):
        V = np.ones_like(X)
        K = np.ones_like(X)
        K[100] = 0.0
        verdict = check_positivity(X, V, K)
        assert verdict.status == FLAGGED
        assert verdict.witnesses
        assert verdict.witnesses[0]["x"] == pytest.approx(X[100])

    def test_unbounded_ramp_flagged(self):
        V = np.ones_like(X)
        K = np.abs(X) + 0.1
        verdict = check_positivity(X, V, K)
        assert verdict.status == FLAGGED
        assert "grow" in verdict.detail


class TestVanishingTail:
    def test_log_tail_with_bumps_passes(self, paper_pair):
        _, K = paper_pair
        assert check_vanishing_tail(X, K, window_measure=2.0).status == PASS

    def test_constant_flagged(self):
        verdict = check_vanishing_tail(X, np.ones_like(X), window_measure=2.0)
        assert verdict.status == FLAGGED
        assert verdict.witnesses

    def test_compact_support_passes(self):
        K = np.where(np.abs(X) < 3.0, 1.0, 0.0) + 0.0
        assert check_vanishing_tail(X, K, window_measure=2.0).status == PASS

    def test_rejects_oversized_window(self):
        with pytest.raises(ParameterError):
            check_vanishing_tail(X, np.ones_like(X), window_measure=100.0)

    def test_rejects_unordered_radii(self):
        with pytest.raises(ParameterError):
            check_vanishing_tail(X, np.ones_like(X), 2.0, radii=[5.0, 4.0])


class TestBoundedRatio:
    def test_equal_pair_passes(self, paper_pair):
        V, K = paper_pair
        verdict = check_bounded_ratio(X, V, K)
        assert verdict.status == PASS

    def test_growing_ratio_flagged(self):
        K = np.ones_like(X)
        V = 1.0 / (1.0 + X ** 2)
        assert check_bounded_ratio(X, V, K).status == FLAGGED

    def test_requires_positive_potential(self):
        V = np.zeros_like(X)
        with pytest.raises(ParameterError):
            check_bounded_ratio(X, V, np.ones_like(X))


class TestDecayingRatio:
    def test_powered_tail_pair_passes(self):
        # potential built from a smaller exponent than the one checked, so
        # the weighted ratio decays like a positive power of the log tail
        m_build, m_check = 3.0, 4.0
        top = 10.0
        V = bump_family(X) + powered_log_tail(X, (top - 2.0) / (top - m_build))
        K = bump_family(X) + log_tail(X)
        verdict = check_decaying_ratio(X, V, K, m=m_check, alpha=0.4, dim=1)
        assert verdict.status == PASS

    def test_constant_pair_flagged(self):
        ones = np.ones_like(X)
        assert check_decaying_ratio(X, ones, ones, m=4.0, alpha=0.4).status == FLAGGED

    def test_rejects_out_of_window_exponent(self):
        ones = np.ones_like(X)
        with pytest.raises(ParameterError):
            check_decaying_ratio(X, ones, ones, m=12.0, alpha=0.4)


class TestNonlinearityConditions:
    def test_positive_power_all_pass(self):
        spec = NonlinearitySpec("positive_power", 4.0)
        out = check_nonlinearity(spec, mode="bounded_ratio", m=4.0, alpha=0.4)
        for name, verdict in out.items():
            assert verdict.status == PASS, (name, verdict.detail)

    def test_odd_power_all_pass(self):
        spec = NonlinearitySpec("odd_power", 4.0)
        out = check_nonlinearity(spec, mode="bounded_ratio", m=4.0, alpha=0.4)
        for name, verdict in out.items():
            assert verdict.status == PASS, (name, verdict.detail)

    def test_log_model_passes_slope_and_growth(self):
        spec = NonlinearitySpec("log_model", 4.0)
        out = check_nonlinearity(spec, mode="bounded_ratio", m=4.0, alpha=0.4)
        assert out["slope_ratio_monotone"].status == PASS
        assert out["subcritical_growth"].status == PASS
        assert out["superquadratic_primitive"].status == PASS
        assert out["energy_gap_monotone"].status == PASS

    def test_linear_flagged_on_slope_ratio(self):
        out = check_nonlinearity(
            lambda t: np.asarray(t, dtype=float),
            F=lambda t: 0.5 * np.asarray(t, dtype=float) ** 2,
            mode="bounded_ratio",
            m=4.0,
            alpha=0.4,
        )
        assert out["slope_ratio_monotone"].status == FLAGGED

    def test_energy_gap_monotone_all_models(self):
        for model in ("positive_power", "odd_power", "log_model"):
            out = check_nonlinearity(
                NonlinearitySpec(model, 4.0), mode="bounded_ratio", m=4.0, alpha=0.4
            )
            assert out["energy_gap_monotone"].status == PASS, model

    def test_decaying_mode_bounded_near_zero(self):
        # on the decaying-ratio route the near-zero condition only asks for
        # boundedness of f(t)/|t|^(m-1); the quartic odd model gives ratio 1
        spec = NonlinearitySpec("odd_power", 4.0)
        out = check_nonlinearity(spec, mode="decaying_ratio", m=4.0, alpha=0.4)
        assert out["near_zero_bounded"].status == PASS

    def test_decaying_mode_flags_singular_slope(self):
        f = lambda t: np.abs(np.asarray(t, dtype=float)) ** 1.5 * np.sign(t)
        F = lambda t: np.abs(np.asarray(t, dtype=float)) ** 2.5 / 2.5
        out = check_nonlinearity(f, F=F, mode="decaying_ratio", m=4.0, alpha=0.4)
        assert out["near_zero_bounded"].status == FLAGGED

    def test_numeric_primitive_fallback(self):
        # no F supplied: integrate f numerically
        grid = np.concatenate([-np.logspace(-2, 1, 12)[::-1], np.logspace(-2, 1, 12)])
        out = check_nonlinearity(
            lambda t: np.asarray(t, dtype=float) ** 3,
            mode="bounded_ratio",
            m=4.0,
            alpha=0.4,
            t_grid=grid,
        )
        assert out["superquadratic_primitive"].status == PASS

    def test_rejects_grid_containing_zero(self):
        with pytest.raises(ParameterError):
            check_nonlinearity(
                NonlinearitySpec("odd_power", 4.0), t_grid=np.array([-1.0, 0.0, 1.0])
            )


class TestValidatePair:
    def test_constant_pair_summary(self):
        ones = np.ones_like(X)
        report = validate_pair(X, ones, ones, NonlinearitySpec("odd_power", 4.0), 4.0, 0.4)
        assert report.conditions["positivity"].status == PASS
        assert report.conditions["bounded_ratio"].status == PASS
        assert report.conditions["vanishing_tail"].status == FLAGGED
        assert report.route_observed == "bounded_ratio"
        assert "condition" in report.table()

    def test_paper_pair_summary(self, paper_pair):
        V, K = paper_pair
        report = validate_pair(X, V, K, NonlinearitySpec("odd_power", 4.0), 4.0, 0.4)
        assert report.conditions["positivity"].status == PASS
        assert report.conditions["vanishing_tail"].status == PASS
        assert report.conditions["bounded_ratio"].status == PASS
        assert report.route_observed == "bounded_ratio"

    def test_as_dict_round_trip(self, paper_pair):
        V, K = paper_pair
        report = validate_pair(X, V, K, NonlinearitySpec("odd_power", 4.0), 4.0, 0.4)
        data = report.as_dict()
        assert set(data) == {"conditions", "route_claimed", "route_observed"}
        assert all("status" in v for v in data["conditions"].values())
