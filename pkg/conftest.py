"""Shared fixtures: the reference link (d = 5 m, alpha = 4) and the figure parameter sets."""

import os

import pytest

from analytic_bounds import BandwidthSplit, PathLoss, TrafficSpec, thresholds_for
from feedback_bounds import AntennaConfig, FeedbackSpec
from montecarlo import SimRegion, TrialPlan

ROOT = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture
def config_path():
    def path(name):
        return os.path.join(ROOT, "configs", name)
    return path


@pytest.fixture
def pl():
    return PathLoss(alpha=4.0, d=5.0)


@pytest.fixture
def fig2(pl):
    traffic = TrafficSpec(b_tr=1028, b_rt=30)
    split = BandwidthSplit(f_total=1e6, f_tr=0.99e6)
    return traffic, split, thresholds_for(traffic, split, pl)


@pytest.fixture
def fig3(pl):
    traffic = TrafficSpec(b_tr=1024, b_rt=256)
    split = BandwidthSplit(f_total=1e6, f_tr=0.8e6)
    return traffic, split, thresholds_for(traffic, split, pl)


@pytest.fixture
def fig6():
    traffic = TrafficSpec(b_tr=1024, b_rt=56)
    split = BandwidthSplit(f_total=1e6, f_tr=0.94e6)
    return traffic, split, AntennaConfig(n=3), FeedbackSpec(b_fb=2, c3=0.5)


@pytest.fixture
def region(pl):
    return SimRegion(d=pl.d)


@pytest.fixture
def plan():
    return TrialPlan(n_trials=20000, master_seed=12345)
