"""Model nonlinearities: values, primitives, continuity, admissible exponents."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracnodal import (
    NonlinearitySpec,
    ParameterError,
    critical_exponent,
    validate_exponent,
)


class TestModels:
    def test_odd_power_values(self):
        spec = NonlinearitySpec("odd_power", 4.0)
        assert spec.f(2.0) == pytest.approx(8.0)
        assert spec.F(2.0) == pytest.approx(4.0)
        assert spec.f(-2.0) == pytest.approx(-8.0)

    def test_positive_power_vanishes_on_negatives(self):
        spec = NonlinearitySpec("positive_power", 4.0)
        assert spec.f(-1.0) == 0.0
        assert spec.F(-1.0) == 0.0
        assert spec.f(3.0) == pytest.approx(81.0)

    def test_log_model_continuity_at_one(self):
        spec = NonlinearitySpec("log_model", 4.0)
        eps = 1e-9
        assert abs(spec.f(1.0) - np.log(2.0)) <= 1e-12
        assert abs(spec.f(1.0 + eps) - spec.f(1.0)) <= 1e-8
        assert abs(spec.F(1.0 + eps) - spec.F(1.0)) <= 1e-8

    def test_f_vanishes_at_zero(self):
        for model in ("positive_power", "odd_power", "log_model"):
            spec = NonlinearitySpec(model, 3.5)
            assert spec.f(0.0) == 0.0
            assert spec.F(0.0) == 0.0

    @pytest.mark.parametrize("model", ["positive_power", "odd_power", "log_model"])
    def test_primitive_differentiates_to_f(self, model):
        spec = NonlinearitySpec(model, 4.0)
        ts = np.concatenate([np.linspace(-5, -0.1, 40), np.linspace(0.1, 5, 40)])
        eps = 1e-6
        fd = (spec.F(ts + eps) - spec.F(ts - eps)) / (2 * eps)
        fv = spec.f(ts)
        assert np.max(np.abs(fd - fv)) <= 1e-5 * (1.0 + np.max(np.abs(fv)))

    @pytest.mark.parametrize("model", ["positive_power", "odd_power", "log_model"])
    def test_primitive_nonnegative(self, model):
        spec = NonlinearitySpec(model, 4.0)
        ts = np.linspace(-100.0, 100.0, 4001)
        assert np.all(spec.F(ts) >= 0.0)

    @settings(max_examples=50, deadline=None)
    @given(t=st.floats(-1e3, 1e3, allow_nan=False))
    def test_primitive_nonnegative_property(self, t):
        assert NonlinearitySpec("odd_power", 3.0).F(t) >= 0.0

    def test_rejects_unknown_model(self):
        with pytest.raises(ParameterError):
            NonlinearitySpec("cubic", 3.0)

    def test_rejects_small_exponent(self):
        with pytest.raises(ParameterError):
            NonlinearitySpec("odd_power", 2.0)


class TestExponentWindow:
    def test_critical_value(self):
        assert critical_exponent(1, 0.4) == pytest.approx(10.0)

    def test_validate_inside(self):
        validate_exponent(4.0, 1, 0.4)

    @pytest.mark.parametrize("m", [2.0, 10.001, 12.0])
    def test_validate_outside(self, m):
        with pytest.raises(ParameterError):
            validate_exponent(m, 1, 0.4)

    def test_regime_guard(self):
        with pytest.raises(ParameterError):
            critical_exponent(1, 0.5)
