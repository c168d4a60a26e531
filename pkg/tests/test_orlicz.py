import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lawprice import (
    AtomSpace,
    Payoff,
    ValidationError,
    YoungFunction,
    delta2_check,
    exp_young,
    linf_young,
    luxemburg_norm,
    norm_order_check,
    power_young,
)
from lawprice.orlicz import heart_membership, young_from_config

from conftest import payoff

values = st.lists(st.floats(min_value=-20, max_value=20, allow_nan=False), min_size=1, max_size=8)


class TestYoungValidation:
    def test_rejects_nonzero_at_origin(self):
        with pytest.raises(ValidationError):
            YoungFunction("shifted", lambda t: np.asarray(t) + 1.0)

    def test_rejects_decreasing(self):
        with pytest.raises(ValidationError):
            YoungFunction("down", lambda t: -np.asarray(t, dtype=float))

    def test_rejects_concave(self):
        with pytest.raises(ValidationError):
            YoungFunction("sqrt", lambda t: np.sqrt(np.asarray(t, dtype=float)))

    def test_rejects_constant_zero(self):
        with pytest.raises(ValidationError):
            YoungFunction("zero", lambda t: np.zeros_like(np.asarray(t, dtype=float)))

    def test_power_needs_p_at_least_one(self):
        with pytest.raises(ValidationError):
            power_young(0.5)

    def test_declared_finite_must_be_finite(self):
        with pytest.raises(ValidationError):
            YoungFunction("bad_linf", lambda t: np.where(np.asarray(t) <= 1, 0.0, np.inf))

    def test_config(self):
        assert young_from_config({"type": "power", "p": 2}).name == "power(2)"
        assert young_from_config({"type": "exp"}).name == "exp"
        assert young_from_config({"type": "linf"}).name == "linf"
        with pytest.raises(ValidationError):
            young_from_config({"type": "sobolev"})


class TestLuxemburgNorm:
    def test_power_one_is_mean_abs(self, rng):
        phi = power_young(1.0)
        for _ in range(25):
            n = int(rng.integers(1, 9))
            x = Payoff(AtomSpace(n), rng.normal(0, 3, size=n))
            expected = float(np.abs(x.values).mean())
            assert luxemburg_norm(phi, x, tol=1e-11) == pytest.approx(expected, abs=1e-9)

    def test_power_two_example(self):
        assert luxemburg_norm(power_young(2.0), payoff(0, 2), tol=1e-12) == pytest.approx(
            math.sqrt(2.0), abs=1e-10
        )

    def test_power_two_is_rms(self, rng):
        phi = power_young(2.0)
        x = Payoff(AtomSpace(6), rng.normal(size=6))
        expected = math.sqrt(float((x.values**2).mean()))
        assert luxemburg_norm(phi, x, tol=1e-12) == pytest.approx(expected, abs=1e-9)

    def test_linf_indicator_is_max_abs(self, rng):
        phi = linf_young()
        for _ in range(20):
            n = int(rng.integers(1, 8))
            x = Payoff(AtomSpace(n), rng.normal(0, 2, size=n))
            assert luxemburg_norm(phi, x, tol=1e-11) == pytest.approx(
                float(np.abs(x.values).max()), abs=1e-9
            )

    def test_zero_payoff(self):
        assert luxemburg_norm(power_young(2.0), payoff(0, 0, 0)) == 0.0

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ValidationError):
            luxemburg_norm(power_young(2.0), payoff(1, 2), tol=0.0)

    @given(values, st.floats(min_value=-4, max_value=4, allow_nan=False))
    def test_absolute_homogeneity(self, vals, c):
        phi = power_young(2.0)
        x = payoff(*vals)
        lhs = luxemburg_norm(phi, c * x, tol=1e-11)
        rhs = abs(c) * luxemburg_norm(phi, x, tol=1e-11)
        assert lhs == pytest.approx(rhs, abs=1e-7)

    def test_exp_young_norm_exists(self):
        v = luxemburg_norm(exp_young(), payoff(0, 1, -2), tol=1e-10)
        assert 0 < v < 10


class TestNormOrder:
    @pytest.mark.parametrize("phi", [power_young(1.0), power_young(2.0), exp_young()])
    def test_axioms_hold(self, phi):
        report = norm_order_check(phi, space_n=5, trials=120, seed=3)
        assert report.ok, report


class TestDelta2:
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
    def test_powers_hold_with_exact_constant(self, p):
        verdict = delta2_check(power_young(p))
        assert verdict.holds
        assert verdict.k == pytest.approx(2.0**p, abs=1e-9)

    def test_exponential_fails_with_growing_trace(self):
        verdict = delta2_check(exp_young(), t_max=50.0)
        assert not verdict.holds
        assert verdict.k is None
        assert verdict.ratios[-1] > verdict.ratios[0]

    def test_indicator_rejected(self):
        with pytest.raises(ValidationError):
            delta2_check(linf_young())

    def test_shifted_linear_growth_holds(self):
        phi = YoungFunction("hinge", lambda t: np.maximum(np.asarray(t, dtype=float) - 1.0, 0.0))
        verdict = delta2_check(phi, t_min=2.0)
        assert verdict.holds and verdict.k <= 4.0


class TestHeart:
    def test_everything_is_a_member_on_finite_spaces(self):
        assert heart_membership(exp_young(), payoff(5, -7))
        assert heart_membership(linf_young(), payoff(100.0))
