"""Lower bound on two-way capacity with transmit beamforming and limited feedback.

Each transmitter has N antennas and beamforms with a codeword chosen by its
receiver and fed back over the reverse band using B bits. Quantization keeps a
fraction gamma = 1 - c3 (1/B)^(1/(N-1)) of the genie-aided signal power, and the
feedback itself must be decoded at threshold beta3 = d^alpha 2^(B/F_RT).
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

from scipy import special

from analytic_bounds import (
    BandwidthSplit, NetworkDensity, OutageTarget, PathLoss, TrafficSpec,
    interference_constant_lower, sir_threshold, validate_alpha,
)
from config import DEFAULT_C3
from errors import InvalidParameterError, VacuousBoundError

logger = logging.getLogger(__name__)

CONVENTIONS = ("product", "paper-literal")


@dataclass(frozen=True)
class AntennaConfig:
    """Transmit antenna count N."""
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise InvalidParameterError("n", f"must be an integer >= 1, got {self.n!r}")


@dataclass(frozen=True)
class FeedbackSpec:
    """Feedback codeword bits B and the quantization-loss coefficient c3.

    subtract_one selects beta3 = d^alpha (2^(B/F_RT) - 1) instead of the verbatim
    d^alpha 2^(B/F_RT). feedback_array_gain=False charges the feedback link with the
    single-antenna constant c1 instead of c4 N^(-2/alpha).
    """
    b_fb: int
    c3: float = DEFAULT_C3
    subtract_one: bool = False
    feedback_array_gain: bool = True

    def __post_init__(self):
        if not isinstance(self.b_fb, int) or isinstance(self.b_fb, bool) or self.b_fb < 1:
            raise InvalidParameterError("b_fb", f"must be an integer >= 1, got {self.b_fb!r}")
        if self.c3 is None or not 0 < self.c3 <= 1:
            raise InvalidParameterError("c3", f"must lie in (0, 1], got {self.c3!r}")

    def with_bits(self, b_fb: int) -> "FeedbackSpec":
        return FeedbackSpec(b_fb=b_fb, c3=self.c3, subtract_one=self.subtract_one,
                            feedback_array_gain=self.feedback_array_gain)


@dataclass(frozen=True)
class FeedbackBound:
    """Constants and capacity lower bound for one feedback configuration."""
    gamma: float
    beta3: float
    c4: float
    tc_lower: float

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise InvalidParameterError("gamma", f"must lie in (0, 1], got {self.gamma}")
        if self.tc_lower < 0:
            raise InvalidParameterError("tc_lower", f"must be non-negative, got {self.tc_lower}")


def quantization_gain(fs: FeedbackSpec, ac: AntennaConfig) -> float:
    """Signal-power retention gamma; 1 for a single antenna."""
    if ac.n == 1:
        return 1.0
    loss = fs.c3 * (1.0 / fs.b_fb) ** (1.0 / (ac.n - 1))
    gamma = 1.0 - loss
    if gamma <= 0:
        raise VacuousBoundError(f"gamma = {gamma:.4f} for B={fs.b_fb}, N={ac.n}, c3={fs.c3}; increase B")
    return gamma


def beamforming_constant(ac: AntennaConfig, alpha: float, convention: str = "product") -> float:
    """c4: the product of the antenna-count series and the Beta-function sum.

    "paper-literal" returns the reciprocal (the printed overall exponent -1).
    """
    alpha = validate_alpha(alpha)
    if convention not in CONVENTIONS:
        raise InvalidParameterError("convention", f"must be one of {CONVENTIONS}, got {convention!r}")
    delta = 2.0 / alpha
    n = ac.n

    series = 1.0
    term = 1.0
    for k in range(n - 1):
        term *= (k - delta) / (k + 1)
        series += term

    log_terms = [
        special.gammaln(n + 1) - special.gammaln(k + 1) - special.gammaln(n - k + 1)
        + special.betaln(delta + k, n - delta + k)
        for k in range(n)
    ]
    beta_sum = (2.0 * math.pi / alpha) * math.exp(special.logsumexp(log_terms))

    c4 = series * beta_sum
    if convention == "paper-literal":
        return 1.0 / c4
    return c4


def feedback_threshold(fs: FeedbackSpec, f_rt: float, pl: PathLoss) -> float:
    """beta3 = d^alpha 2^(B/F_RT), or d^alpha (2^(B/F_RT) - 1) when fs.subtract_one."""
    if f_rt is None or not math.isfinite(f_rt) or f_rt <= 0:
        raise InvalidParameterError("f_rt", f"feedback bandwidth must be positive, got {f_rt!r}")
    if fs.subtract_one:
        return sir_threshold(fs.b_fb, f_rt, pl)
    try:
        return pl.d ** pl.alpha * 2.0 ** (fs.b_fb / f_rt)
    except OverflowError:
        return math.inf


def _outage_slope(beta1: float, beta3: float, gamma: float, ac: AntennaConfig, alpha: float,
                  c4: float, feedback_array_gain: bool = True) -> float:
    """Coefficient K of lambda in the first-order outage bound K * lambda."""
    if gamma <= 0:
        raise VacuousBoundError(f"gamma = {gamma} is not positive")
    delta = 2.0 / alpha
    array = c4 * ac.n ** (-delta)
    forward = array * (beta1 / gamma) ** delta
    if feedback_array_gain:
        feedback = array * beta3 ** delta
    else:
        feedback = interference_constant_lower(alpha) * beta3 ** delta
    return forward + feedback


def feedback_success_lower(nd, beta1: float, beta3: float, gamma: float, ac: AntennaConfig,
                           alpha: float, c4: float = None, feedback_array_gain: bool = True) -> float:
    """max(0, 1 - c4 lambda N^(-2/alpha) [(beta1/gamma)^(2/alpha) + beta3^(2/alpha)])."""
    alpha = validate_alpha(alpha)
    lam = nd.lam if isinstance(nd, NetworkDensity) else NetworkDensity(lam=nd).lam
    if c4 is None:
        c4 = beamforming_constant(ac, alpha)
    raw = 1.0 - lam * _outage_slope(beta1, beta3, gamma, ac, alpha, c4, feedback_array_gain)
    if raw < 0:
        logger.warning(f"Feedback success bound {raw:.4f} clamped to 0 at lambda={lam:.3e}")
        return 0.0
    return raw


def feedback_bound(ot: OutageTarget, traffic: TrafficSpec, split: BandwidthSplit, fs: FeedbackSpec,
                   ac: AntennaConfig, pl: PathLoss, convention: str = "product") -> FeedbackBound:
    """gamma, beta3, c4 and the capacity lower bound (1-eps) eps N^(2/alpha) / (c4 [...]) B_TR / F_total."""
    gamma = quantization_gain(fs, ac)
    beta1 = sir_threshold(traffic.b_tr, split.f_tr, pl)
    beta3 = feedback_threshold(fs, split.f_rt, pl)
    c4 = beamforming_constant(ac, pl.alpha, convention)
    slope = _outage_slope(beta1, beta3, gamma, ac, pl.alpha, c4, fs.feedback_array_gain)
    lam = ot.eps / slope if slope > 0 else math.inf
    tc = (1.0 - ot.eps) * lam * traffic.b_tr / split.f_total
    logger.debug(f"feedback_bound B={fs.b_fb}: gamma={gamma:.4f}, beta3={beta3:.4f}, c4={c4:.4f}, tc={tc:.4e}")
    return FeedbackBound(gamma=gamma, beta3=beta3, c4=c4, tc_lower=tc)


def feedback_tc_lower(ot: OutageTarget, traffic: TrafficSpec, split: BandwidthSplit, fs: FeedbackSpec,
                      ac: AntennaConfig, pl: PathLoss, convention: str = "product") -> float:
    """Lower bound on the beamforming two-way capacity in bits/sec/Hz/m^2."""
    return feedback_bound(ot, traffic, split, fs, ac, pl, convention).tc_lower


def genie_tc_oneway(ot: OutageTarget, b_tr: float, f_total: float, ac: AntennaConfig, pl: PathLoss,
                    convention: str = "product") -> float:
    """One-way genie-aided beamforming capacity eps (1-eps) N^(2/alpha) / (c4 beta^(2/alpha)) B / F_total."""
    beta = sir_threshold(b_tr, f_total, pl)
    c4 = beamforming_constant(ac, pl.alpha, convention)
    lam = ot.eps * ac.n ** pl.delta / (c4 * beta ** pl.delta)
    return (1.0 - ot.eps) * lam * b_tr / f_total


def best_feedback_bits(ot: OutageTarget, traffic: TrafficSpec, split: BandwidthSplit, fs: FeedbackSpec,
                       ac: AntennaConfig, pl: PathLoss, b_grid: Iterable[int],
                       convention: str = "product") -> Tuple[int, List[Dict]]:
    """Scan feedback bit counts and return the maximizer of the lower bound with the scanned rows.

    Bit counts whose gamma is not positive are reported with tc_lower = 0.
    """
    rows = []
    best_b, best_tc = None, -1.0
    for b in b_grid:
        try:
            tc = feedback_tc_lower(ot, traffic, split, fs.with_bits(int(b)), ac, pl, convention)
        except VacuousBoundError as e:
            logger.info(f"Skipping B={b}: {e}")
            tc = 0.0
        rows.append({'b_fb': int(b), 'tc_lower_feedback': tc})
        if tc > best_tc:
            best_b, best_tc = int(b), tc
    if best_b is None:
        raise InvalidParameterError("b_grid", "no feedback bit counts to scan")
    return best_b, rows
