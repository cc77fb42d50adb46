import math

import numpy as np
import pytest

from analytic_bounds import OutageTarget, interference_constant_lower, sir_threshold
from errors import InvalidParameterError, VacuousBoundError
from feedback_bounds import (
    AntennaConfig, FeedbackSpec, beamforming_constant, best_feedback_bits, feedback_bound,
    feedback_success_lower, feedback_tc_lower, feedback_threshold, genie_tc_oneway, quantization_gain,
)


class TestQuantizationGain:

    def test_single_antenna(self):
        assert quantization_gain(FeedbackSpec(b_fb=1), AntennaConfig(n=1)) == 1.0

    def test_three_antennas_two_bits(self):
        gamma = quantization_gain(FeedbackSpec(b_fb=2, c3=0.5), AntennaConfig(n=3))
        assert gamma == pytest.approx(1 - 0.5 / math.sqrt(2), rel=1e-14)

    def test_increases_with_bits(self):
        gains = [quantization_gain(FeedbackSpec(b_fb=b), AntennaConfig(n=4)) for b in range(1, 50)]
        assert np.all(np.diff(gains) > 0)
        assert gains[-1] < 1.0

    def test_vacuous(self):
        with pytest.raises(VacuousBoundError):
            quantization_gain(FeedbackSpec(b_fb=1, c3=1.0), AntennaConfig(n=2))

    @pytest.mark.parametrize("kwargs", [{"b_fb": 0}, {"b_fb": 2, "c3": 0.0}, {"b_fb": 2, "c3": 1.5}, {"b_fb": 1.5}])
    def test_spec_validation(self, kwargs):
        with pytest.raises(InvalidParameterError):
            FeedbackSpec(**kwargs)

    def test_antenna_validation(self):
        with pytest.raises(InvalidParameterError):
            AntennaConfig(n=0)


class TestBeamformingConstant:

    @pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0, 6.0])
    def test_single_antenna_equals_c1(self, alpha):
        c4 = beamforming_constant(AntennaConfig(n=1), alpha)
        assert c4 == pytest.approx(interference_constant_lower(alpha), rel=1e-10)

    def test_two_antennas_closed_form(self):
        # (1 - 1/2) * (pi/2) * (B(1/2, 3/2) + 2 B(3/2, 5/2)) = 5 pi^2 / 32
        assert beamforming_constant(AntennaConfig(n=2), 4.0) == pytest.approx(5 * math.pi ** 2 / 32, rel=1e-10)

    def test_reciprocal_convention(self):
        ac = AntennaConfig(n=3)
        assert beamforming_constant(ac, 4.0, "paper-literal") == pytest.approx(
            1.0 / beamforming_constant(ac, 4.0), rel=1e-14)

    def test_array_factor_shrinks_with_antennas(self):
        scaled = [beamforming_constant(AntennaConfig(n=n), 4.0) * n ** -0.5 for n in range(1, 6)]
        assert np.all(np.diff(scaled) < 0)

    def test_unknown_convention(self):
        with pytest.raises(InvalidParameterError):
            beamforming_constant(AntennaConfig(n=2), 4.0, "inverse")


class TestFeedbackSuccess:

    def test_single_antenna_no_feedback_term(self):
        ac = AntennaConfig(n=1)
        p = feedback_success_lower(1e-3, beta1=2.0, beta3=0.0, gamma=1.0, ac=ac, alpha=4.0)
        assert p == pytest.approx(1 - interference_constant_lower(4.0) * 1e-3 * math.sqrt(2.0), rel=1e-12)

    def test_increases_with_antennas(self):
        values = [feedback_success_lower(2e-3, 1.0, 1.0, 0.8, AntennaConfig(n=n), 4.0) for n in range(1, 6)]
        assert np.all(np.diff(values) > 0)

    def test_clamped_at_zero(self):
        assert feedback_success_lower(10.0, 1.0, 1.0, 0.8, AntennaConfig(n=2), 4.0) == 0.0

    def test_single_entry_feedback_constant(self):
        ac = AntennaConfig(n=3)
        c4 = beamforming_constant(ac, 4.0)
        p = feedback_success_lower(1e-4, 0.5, 625.0, 0.6, ac, 4.0, feedback_array_gain=False)
        expected = 1 - 1e-4 * (c4 / math.sqrt(3) * math.sqrt(0.5 / 0.6) + interference_constant_lower(4.0) * 25.0)
        assert p == pytest.approx(expected, rel=1e-12)


class TestFeedbackThreshold:

    def test_verbatim_and_minus_one(self, pl):
        fs = FeedbackSpec(b_fb=2)
        assert feedback_threshold(fs, 6e4, pl) == pytest.approx(625 * 2 ** (2 / 6e4), rel=1e-14)
        fs_minus = FeedbackSpec(b_fb=2, subtract_one=True)
        assert feedback_threshold(fs_minus, 6e4, pl) == pytest.approx(sir_threshold(2, 6e4, pl), rel=1e-14)

    def test_zero_band_rejected(self, pl):
        with pytest.raises(InvalidParameterError):
            feedback_threshold(FeedbackSpec(b_fb=2), 0.0, pl)


class TestCapacityBound:

    def test_bound_formula(self, pl, fig6):
        traffic, split, ac, fs = fig6
        ot = OutageTarget(0.1)
        bound = feedback_bound(ot, traffic, split, fs, ac, pl)
        beta1 = sir_threshold(1024, 0.94e6, pl)
        array = bound.c4 * 3 ** -0.5
        lam = 0.1 / (array * (math.sqrt(beta1 / bound.gamma) + math.sqrt(bound.beta3)))
        assert bound.tc_lower == pytest.approx(0.9 * lam * 1024 / 1e6, rel=1e-12)
        assert feedback_tc_lower(ot, traffic, split, fs, ac, pl) == bound.tc_lower

    def test_genie_dominates(self, pl, fig6):
        traffic, split, ac, fs = fig6
        for eps in np.linspace(0.01, 0.5, 12):
            ot = OutageTarget(float(eps))
            genie = genie_tc_oneway(ot, traffic.b_tr, split.f_total, ac, pl)
            for spec in (fs, FeedbackSpec(b_fb=2, c3=0.5, feedback_array_gain=False)):
                assert genie >= feedback_tc_lower(ot, traffic, split, spec, ac, pl)

    def test_genie_single_antenna_is_one_way(self, pl):
        ot = OutageTarget(0.1)
        genie = genie_tc_oneway(ot, 1024, 1e6, AntennaConfig(n=1), pl)
        beta = sir_threshold(1024, 1e6, pl)
        expected = 0.1 * 0.9 / (interference_constant_lower(4.0) * math.sqrt(beta)) * 1024 / 1e6
        assert genie == pytest.approx(expected, rel=1e-10)

    def test_bound_eventually_decreases_in_bits(self, pl, fig6):
        traffic, split, ac, fs = fig6
        best, rows = best_feedback_bits(OutageTarget(0.1), traffic, split, fs, ac, pl, range(1, 401))
        assert 30 < best < 200
        tc = [r['tc_lower_feedback'] for r in rows]
        assert tc[-1] < max(tc)
        assert tc[0] < max(tc)

    def test_single_entry_feedback_prefers_fewer_bits(self, pl, fig6):
        traffic, split, ac, _ = fig6
        fs = FeedbackSpec(b_fb=2, feedback_array_gain=False)
        best, _ = best_feedback_bits(OutageTarget(0.1), traffic, split, fs, ac, pl, range(1, 401))
        assert 5 < best < 40

    def test_vacuous_bits_reported_as_zero(self, pl, fig6):
        traffic, split, _, _ = fig6
        fs = FeedbackSpec(b_fb=1, c3=1.0)
        _, rows = best_feedback_bits(OutageTarget(0.1), traffic, split, fs, AntennaConfig(n=2), pl, [1, 2, 4])
        assert rows[0]['tc_lower_feedback'] == 0.0
        assert rows[1]['tc_lower_feedback'] > 0.0

    def test_empty_grid(self, pl, fig6):
        traffic, split, ac, fs = fig6
        with pytest.raises(InvalidParameterError):
            best_feedback_bits(OutageTarget(0.1), traffic, split, fs, ac, pl, [])


class TestFeedbackMonotonicity:

    @pytest.mark.parametrize("alpha", [3.0, 4.0, 5.0])
    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_doubling_antennas_scales_outage(self, alpha, n):
        c4 = 7.5
        outage = [1 - feedback_success_lower(1e-4, 0.8, 2.0, 0.7, AntennaConfig(n=m), alpha, c4=c4)
                  for m in (n, 2 * n)]
        assert outage[0] / outage[1] == pytest.approx(2 ** (2 / alpha), rel=1e-10)

    @pytest.mark.parametrize("array_gain", [True, False])
    def test_increasing_in_gamma(self, array_gain):
        ac = AntennaConfig(n=3)
        values = [feedback_success_lower(1e-4, 0.5, 625.0, g, ac, 4.0, feedback_array_gain=array_gain)
                  for g in np.linspace(0.1, 1.0, 19)]
        assert np.all(np.diff(values) > 0)

    @pytest.mark.parametrize("array_gain", [True, False])
    def test_decreasing_in_thresholds(self, array_gain):
        ac = AntennaConfig(n=3)
        grid = np.linspace(0.1, 50.0, 25)
        by_beta1 = [feedback_success_lower(1e-4, b, 625.0, 0.6, ac, 4.0, feedback_array_gain=array_gain)
                    for b in grid]
        by_beta3 = [feedback_success_lower(1e-4, 0.5, b, 0.6, ac, 4.0, feedback_array_gain=array_gain)
                    for b in grid]
        assert np.all(np.diff(by_beta1) < 0)
        assert np.all(np.diff(by_beta3) < 0)

    @pytest.mark.parametrize("n", [1, 2, 3, 6])
    def test_free_feedback_reduces_to_one_way(self, pl, n):
        ac = AntennaConfig(n=n)
        ot = OutageTarget(0.1)
        beta = sir_threshold(1024, 1e6, pl)
        lam = 0.1 * n ** 0.5 / (beamforming_constant(ac, 4.0) * beta ** 0.5)
        for array_gain in (True, False):
            p = feedback_success_lower(lam, beta, 0.0, 1.0, ac, 4.0, feedback_array_gain=array_gain)
            assert p == pytest.approx(0.9, rel=1e-12)
        assert 0.9 * lam * 1024 / 1e6 == pytest.approx(genie_tc_oneway(ot, 1024, 1e6, ac, pl), rel=1e-12)
