import math

import numpy as np
import pytest

from analytic_bounds import (
    BandwidthSplit, CapacityInterval, NetworkDensity, OutageTarget, PathLoss, SirThresholds, TrafficSpec,
    density_interval_at_outage, interference_constant_lower, interference_constant_upper,
    joint_success_lower, joint_success_upper, one_way_success, oneway_tc, sir_threshold, tc_from_density,
    tc_interval, thresholds_for, validate_alpha,
)
from errors import InvalidParameterError, UnboundedDensityError


class TestInterferenceConstants:

    @pytest.mark.parametrize("alpha", [2.1, 2.5, 3, 4, 6, 8, 16])
    def test_upper_over_lower_ratio(self, alpha):
        ratio = interference_constant_upper(alpha) / interference_constant_lower(alpha)
        assert ratio == pytest.approx(0.5 + 1.0 / alpha, rel=1e-12)

    def test_closed_forms(self):
        assert interference_constant_lower(4) == pytest.approx(math.pi ** 2 / 2, rel=1e-12)
        assert interference_constant_upper(4) == pytest.approx(3 * math.pi ** 2 / 8, rel=1e-12)
        assert interference_constant_lower(3) == pytest.approx(2 * math.pi ** 2 * (2 / math.sqrt(3)) / 3, rel=1e-12)
        assert interference_constant_lower(3) == pytest.approx(7.5976, rel=1e-4)

    def test_large_alpha_limit(self):
        assert interference_constant_lower(1e6) == pytest.approx(math.pi, rel=1e-6)

    @pytest.mark.parametrize("alpha", [2.0, 1.5, -4.0, float("nan"), float("inf")])
    def test_rejects_alpha(self, alpha):
        with pytest.raises(InvalidParameterError) as exc:
            validate_alpha(alpha)
        assert exc.value.field == "alpha"

    def test_invalid_parameter_is_value_error(self):
        with pytest.raises(ValueError):
            PathLoss(alpha=4.0, d=0.0)


class TestSirThreshold:

    def test_unit_rate_unit_distance(self):
        assert sir_threshold(1e6, 1e6, PathLoss(alpha=4, d=1)) == pytest.approx(1.0, rel=1e-12)

    def test_zero_rate(self, pl):
        assert sir_threshold(0, 1e6, pl) == 0.0

    def test_fig2_forward(self, pl):
        beta = sir_threshold(1028, 0.99e6, pl)
        assert beta == pytest.approx(625 * (2 ** (1028 / 0.99e6) - 1), rel=1e-12)
        assert beta == pytest.approx(0.450007, rel=1e-5)

    def test_overflow_saturates(self, pl):
        assert sir_threshold(1e6, 1.0, pl) == math.inf

    def test_rejects_bad_inputs(self, pl):
        with pytest.raises(InvalidParameterError):
            sir_threshold(100, 0.0, pl)
        with pytest.raises(InvalidParameterError):
            sir_threshold(-1, 1e6, pl)

    def test_thresholds_for_uses_each_band(self, pl, fig2):
        traffic, split, th = fig2
        assert th.beta1 == sir_threshold(traffic.b_tr, split.f_tr, pl)
        assert th.beta2 == sir_threshold(traffic.b_rt, split.f_rt, pl)
        assert th.alpha == 4.0


class TestSuccessBounds:

    def test_no_interferers(self):
        th = SirThresholds(beta1=2.0, beta2=3.0, alpha=4.0)
        assert joint_success_lower(0.0, th) == 1.0
        assert joint_success_upper(0.0, th) == 1.0

    def test_zero_thresholds(self):
        th = SirThresholds(beta1=0.0, beta2=0.0, alpha=4.0)
        assert joint_success_lower(0.1, th) == 1.0

    def test_direct_evaluation(self):
        th = SirThresholds(beta1=1.0, beta2=1.0, alpha=4.0)
        assert joint_success_lower(1e-4, th) == pytest.approx(math.exp(-2e-4 * math.pi ** 2 / 2), rel=1e-12)
        assert joint_success_lower(1e-4, th) == pytest.approx(0.999013, abs=1e-6)
        assert joint_success_upper(1e-4, th) == pytest.approx(0.999260, abs=1e-6)

    def test_accepts_network_density(self):
        th = SirThresholds(beta1=1.0, beta2=1.0, alpha=4.0)
        nd = NetworkDensity.from_aloha(lambda0=1e-3, p_a=0.1)
        assert joint_success_lower(nd, th) == pytest.approx(joint_success_lower(1e-4, th), rel=1e-14)

    def test_upper_dominates_lower(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            th = SirThresholds(beta1=rng.uniform(0, 10), beta2=rng.uniform(0, 10), alpha=rng.uniform(2.2, 8))
            lam = rng.uniform(0, 1e-2)
            assert joint_success_upper(lam, th) >= joint_success_lower(lam, th)

    def test_one_way(self):
        assert one_way_success(0.0, 1.0, 4.0) == 1.0
        assert one_way_success(1e-3, 0.0, 4.0) == 1.0
        assert one_way_success(1e-4, 0.44988, 4.0) == pytest.approx(0.999669, abs=1e-6)

    def test_alpha_required(self):
        with pytest.raises(InvalidParameterError):
            joint_success_lower(1e-4, SirThresholds(beta1=1.0, beta2=1.0))

    def test_negative_density_rejected(self):
        with pytest.raises(InvalidParameterError):
            NetworkDensity(lam=-1e-4)

    def test_aloha_consistency(self):
        with pytest.raises(InvalidParameterError):
            NetworkDensity(lam=1e-3, lambda0=1e-3, p_a=0.5)


class TestDensityInterval:

    def test_direct_evaluation(self):
        th = SirThresholds(beta1=1.0, beta2=1.0, alpha=4.0)
        lam_lower, lam_upper = density_interval_at_outage(OutageTarget(0.1), th)
        assert lam_lower == pytest.approx(-math.log(0.9) / math.pi ** 2, rel=1e-12)
        assert lam_lower == pytest.approx(1.0676e-2, rel=1e-4)
        assert lam_upper / lam_lower == pytest.approx(4.0 / 3.0, rel=1e-12)

    @pytest.mark.parametrize("alpha", [2.5, 3.0, 5.0])
    def test_ratio(self, alpha):
        th = SirThresholds(beta1=0.3, beta2=2.0, alpha=alpha)
        lam_lower, lam_upper = density_interval_at_outage(OutageTarget(0.2), th)
        assert lam_upper / lam_lower == pytest.approx(1.0 / (0.5 + 1.0 / alpha), rel=1e-12)

    def test_small_outage(self):
        th = SirThresholds(beta1=1.0, beta2=1.0, alpha=4.0)
        lam_lower, lam_upper = density_interval_at_outage(OutageTarget(1e-12), th)
        assert lam_lower < lam_upper < 1e-12

    def test_unbounded(self):
        with pytest.raises(UnboundedDensityError):
            density_interval_at_outage(OutageTarget(0.1), SirThresholds(beta1=0.0, beta2=0.0, alpha=4.0))

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.1, 1.5])
    def test_outage_range(self, eps):
        with pytest.raises(InvalidParameterError):
            OutageTarget(eps)


class TestCapacityInterval:

    def test_fig2_interval(self, pl, fig2):
        traffic, split, th = fig2
        interval = tc_interval(OutageTarget(0.1), traffic, split, pl)
        lam_lower, lam_upper = density_interval_at_outage(OutageTarget(0.1), th)
        assert interval.lower == pytest.approx(0.9 * lam_lower * 1058 / 1e6, rel=1e-12)
        assert interval.upper == pytest.approx(0.9 * lam_upper * 1058 / 1e6, rel=1e-12)
        assert interval.ratio == pytest.approx(4.0 / 3.0, rel=1e-12)
        assert interval.c1 == interference_constant_lower(4.0)

    def test_vanishes_at_both_ends(self, pl, fig2):
        traffic, split, _ = fig2
        mid = tc_interval(OutageTarget(0.5), traffic, split, pl)
        for eps in (1e-9, 1 - 1e-12):
            edge = tc_interval(OutageTarget(eps), traffic, split, pl)
            assert 0 < edge.lower < 1e-6 * mid.lower
            assert 0 < edge.upper < 1e-6 * mid.upper

    def test_interior_maximum(self, pl, fig2):
        traffic, split, _ = fig2
        grid = np.linspace(0.01, 0.99, 99)
        lower = [tc_interval(OutageTarget(e), traffic, split, pl).lower for e in grid]
        best = int(np.argmax(lower))
        assert 0 < best < len(grid) - 1
        # -(1 - eps) ln(1 - eps) peaks at eps = 1 - 1/e
        assert grid[best] == pytest.approx(1 - 1 / math.e, abs=0.01)

    def test_unordered_interval_rejected(self):
        with pytest.raises(InvalidParameterError):
            CapacityInterval(lower=2.0, upper=1.0, c1=1.0, c2=0.5, alpha=4.0)

    def test_tc_from_density(self):
        assert tc_from_density(0.1, 1e-3, 1000, 1e6) == pytest.approx(0.9e-6, rel=1e-12)

    def test_oneway_tc(self, pl):
        ot = OutageTarget(0.1)
        beta = sir_threshold(1280, 1e6, pl)
        expected = 0.9 * -math.log(0.9) / (math.pi ** 2 / 2 * math.sqrt(beta)) * 1280 / 1e6
        assert oneway_tc(ot, 1280, 1e6, pl) == pytest.approx(expected, rel=1e-12)

    def test_two_way_below_one_way(self, pl, fig3):
        traffic, split, _ = fig3
        ot = OutageTarget(0.1)
        interval = tc_interval(ot, traffic, split, pl)
        one_way = oneway_tc(ot, traffic.b_total, split.f_total, pl)
        assert interval.lower < one_way
        assert interval.lower / one_way == pytest.approx(0.5, abs=0.02)

    def test_split_validation(self):
        with pytest.raises(InvalidParameterError):
            BandwidthSplit(f_total=1e6, f_tr=1e6)
        assert BandwidthSplit.from_bands(0.8e6, 0.2e6).f_rt == pytest.approx(0.2e6)
        with pytest.raises(InvalidParameterError):
            TrafficSpec(b_tr=0, b_rt=10)


class TestMonotonicity:

    @pytest.mark.parametrize("eps", [1e-6, 0.01, 0.1, 0.5, 0.9, 0.999])
    def test_density_round_trip(self, fig2, eps):
        _, _, th = fig2
        lam_lower, lam_upper = density_interval_at_outage(OutageTarget(eps), th)
        assert abs(joint_success_lower(lam_lower, th) - (1 - eps)) <= 1e-12
        assert abs(joint_success_upper(lam_upper, th) - (1 - eps)) <= 1e-12

    def test_decreasing_in_density(self, fig3):
        _, _, th = fig3
        grid = np.linspace(0.0, 0.05, 51)
        for bound in (joint_success_lower, joint_success_upper):
            assert np.all(np.diff([bound(lam, th) for lam in grid]) < 0)

    @pytest.mark.parametrize("which", ["beta1", "beta2"])
    def test_decreasing_in_thresholds(self, which):
        values = np.linspace(0.0, 5.0, 26)
        for bound in (joint_success_lower, joint_success_upper):
            p = []
            for v in values:
                kwargs = {"beta1": 1.0, "beta2": 1.0, which: v}
                p.append(bound(1e-2, SirThresholds(alpha=3.0, **kwargs)))
            assert np.all(np.diff(p) < 0)

    def test_threshold_increasing_in_bits(self, pl):
        values = [sir_threshold(b, 1e5, pl) for b in range(0, 2000, 50)]
        assert np.all(np.diff(values) > 0)

    def test_threshold_decreasing_in_band(self, pl):
        values = [sir_threshold(1024, f, pl) for f in np.geomspace(1e2, 1e7, 40)]
        assert np.all(np.diff(values) < 0)
