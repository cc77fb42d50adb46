"""Closed-form bounds on the two-way transmission capacity of Poisson ad-hoc networks.

The typical pair is a transmitter and receiver at distance d; interferers form a
homogeneous PPP of intensity lambda, every channel is Rayleigh and the network is
interference limited. Success in both directions is bounded below with the
product of the one-way Laplace functionals (constant c1) and above with the
Cauchy-Schwarz form (constant c2).

Thresholds carry the d^alpha factor, so a threshold of beta means the link
succeeds when |h0|^2 > beta * sum(r_n^-alpha |h_n|^2).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from config import ALPHA_GUARD
from errors import InvalidParameterError, UnboundedDensityError

logger = logging.getLogger(__name__)


def _require_finite(field: str, value: float) -> float:
    if value is None or not math.isfinite(value):
        raise InvalidParameterError(field, f"must be a finite number, got {value!r}")
    return float(value)


def validate_alpha(alpha: float) -> float:
    """Reject path-loss exponents at or below 2 (plus a small guard margin)."""
    alpha = _require_finite("alpha", alpha)
    if alpha < 2.0 + ALPHA_GUARD:
        raise InvalidParameterError("alpha", f"must exceed 2, got {alpha}")
    return alpha


@dataclass(frozen=True)
class PathLoss:
    """Propagation environment: exponent alpha and pair separation d (meters)."""
    alpha: float
    d: float

    def __post_init__(self):
        validate_alpha(self.alpha)
        if _require_finite("d", self.d) <= 0:
            raise InvalidParameterError("d", f"must be positive, got {self.d}")

    @property
    def delta(self) -> float:
        return 2.0 / self.alpha


@dataclass(frozen=True)
class TrafficSpec:
    """Rate demands in bits for the forward (TR) and reverse (RT) directions."""
    b_tr: float
    b_rt: float

    def __post_init__(self):
        if _require_finite("b_tr", self.b_tr) <= 0:
            raise InvalidParameterError("b_tr", f"must be positive, got {self.b_tr}")
        if _require_finite("b_rt", self.b_rt) < 0:
            raise InvalidParameterError("b_rt", f"must be non-negative, got {self.b_rt}")

    @property
    def b_total(self) -> float:
        return self.b_tr + self.b_rt


@dataclass(frozen=True)
class BandwidthSplit:
    """Spectrum partition in Hz; the reverse band is whatever the forward band leaves."""
    f_total: float
    f_tr: float

    def __post_init__(self):
        if _require_finite("f_total", self.f_total) <= 0:
            raise InvalidParameterError("f_total", f"must be positive, got {self.f_total}")
        f_tr = _require_finite("f_tr", self.f_tr)
        if not 0 < f_tr < self.f_total:
            raise InvalidParameterError("f_tr", f"must lie strictly inside (0, {self.f_total}), got {f_tr}")

    @property
    def f_rt(self) -> float:
        return self.f_total - self.f_tr

    @classmethod
    def from_bands(cls, f_tr: float, f_rt: float) -> "BandwidthSplit":
        return cls(f_total=f_tr + f_rt, f_tr=f_tr)


@dataclass(frozen=True)
class NetworkDensity:
    """Active transmitter intensity (nodes/m^2), optionally as Aloha-thinned parent intensity."""
    lam: float
    lambda0: Optional[float] = None
    p_a: Optional[float] = None

    def __post_init__(self):
        if _require_finite("lambda", self.lam) < 0:
            raise InvalidParameterError("lambda", f"must be non-negative, got {self.lam}")
        if (self.lambda0 is None) != (self.p_a is None):
            raise InvalidParameterError("lambda0", "lambda0 and p_a must be given together")
        if self.lambda0 is not None:
            if not 0 <= _require_finite("p_a", self.p_a) <= 1:
                raise InvalidParameterError("p_a", f"must lie in [0, 1], got {self.p_a}")
            if _require_finite("lambda0", self.lambda0) < 0:
                raise InvalidParameterError("lambda0", f"must be non-negative, got {self.lambda0}")
            if not math.isclose(self.lam, self.p_a * self.lambda0, rel_tol=1e-12, abs_tol=1e-300):
                raise InvalidParameterError("lambda", f"must equal p_a * lambda0 = {self.p_a * self.lambda0}")

    @classmethod
    def from_aloha(cls, lambda0: float, p_a: float) -> "NetworkDensity":
        return cls(lam=p_a * lambda0, lambda0=lambda0, p_a=p_a)


@dataclass(frozen=True)
class OutageTarget:
    """Two-way outage probability epsilon."""
    eps: float

    def __post_init__(self):
        if not 0 < _require_finite("eps", self.eps) < 1:
            raise InvalidParameterError("eps", f"must lie strictly inside (0, 1), got {self.eps}")

    @property
    def neg_log_success(self) -> float:
        """-ln(1 - eps), the exponent budget for the success probability."""
        return -math.log1p(-self.eps)


@dataclass(frozen=True)
class SirThresholds:
    """Forward and reverse SIR thresholds (d^alpha scaled).

    Zero thresholds are accepted: they arise from a zero rate demand.
    """
    beta1: float
    beta2: float
    alpha: Optional[float] = None

    def __post_init__(self):
        for field, value in (("beta1", self.beta1), ("beta2", self.beta2)):
            if value is None or math.isnan(value) or value < 0:
                raise InvalidParameterError(field, f"must be a non-negative threshold, got {value!r}")
        if self.alpha is not None:
            validate_alpha(self.alpha)

    @property
    def delta(self) -> float:
        if self.alpha is None:
            raise InvalidParameterError("alpha", "thresholds were built without a path-loss exponent")
        return 2.0 / self.alpha

    def power_sum(self, alpha: Optional[float] = None) -> float:
        """beta1^(2/alpha) + beta2^(2/alpha)."""
        alpha = _resolve_alpha(self, alpha)
        delta = 2.0 / alpha
        return self.beta1 ** delta + self.beta2 ** delta


@dataclass(frozen=True)
class CapacityInterval:
    """Lower/upper two-way transmission capacity (bits/sec/Hz/m^2) and the constants used."""
    lower: float
    upper: float
    c1: float
    c2: float
    alpha: float

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper * (1 + 1e-12):
            raise InvalidParameterError("lower", f"interval [{self.lower}, {self.upper}] is not ordered")

    @property
    def ratio(self) -> float:
        return self.upper / self.lower


def _resolve_alpha(th: SirThresholds, alpha: Optional[float]) -> float:
    if alpha is None:
        if th.alpha is None:
            raise InvalidParameterError("alpha", "no path-loss exponent given")
        return th.alpha
    return validate_alpha(alpha)


def _density_value(nd: Union[NetworkDensity, float]) -> float:
    if isinstance(nd, NetworkDensity):
        return nd.lam
    return NetworkDensity(lam=nd).lam


def sir_threshold(b: float, f: float, pl: PathLoss) -> float:
    """d^alpha * (2^(b/f) - 1): the SIR threshold for rate b bits over f Hz."""
    b = _require_finite("b", b)
    f = _require_finite("f", f)
    if f <= 0:
        raise InvalidParameterError("f", f"bandwidth must be positive, got {f}")
    if b < 0:
        raise InvalidParameterError("b", f"rate must be non-negative, got {b}")
    if b == 0:
        return 0.0
    try:
        return pl.d ** pl.alpha * math.expm1(b / f * math.log(2.0))
    except OverflowError:
        logger.debug(f"Threshold overflow for b={b}, f={f}; saturating to inf")
        return math.inf


def thresholds_for(traffic: TrafficSpec, split: BandwidthSplit, pl: PathLoss) -> SirThresholds:
    """Forward threshold from (B_TR, F_TR) and reverse threshold from (B_RT, F_RT)."""
    return SirThresholds(
        beta1=sir_threshold(traffic.b_tr, split.f_tr, pl),
        beta2=sir_threshold(traffic.b_rt, split.f_rt, pl),
        alpha=pl.alpha,
    )


def interference_constant_lower(alpha: float) -> float:
    """c1 = 2 pi^2 csc(2 pi / alpha) / alpha."""
    alpha = validate_alpha(alpha)
    return 2.0 * math.pi ** 2 / (alpha * math.sin(2.0 * math.pi / alpha))


def interference_constant_upper(alpha: float) -> float:
    """c2 = pi^2 csc(2 pi / alpha) (alpha + 2) / alpha^2; c2 / c1 = 1/2 + 1/alpha."""
    alpha = validate_alpha(alpha)
    return math.pi ** 2 * (alpha + 2.0) / (alpha ** 2 * math.sin(2.0 * math.pi / alpha))


def log_joint_success_lower(nd, th: SirThresholds, alpha: Optional[float] = None) -> float:
    alpha = _resolve_alpha(th, alpha)
    return -_density_value(nd) * interference_constant_lower(alpha) * th.power_sum(alpha)


def log_joint_success_upper(nd, th: SirThresholds, alpha: Optional[float] = None) -> float:
    alpha = _resolve_alpha(th, alpha)
    return -_density_value(nd) * interference_constant_upper(alpha) * th.power_sum(alpha)


def joint_success_lower(nd, th: SirThresholds, alpha: Optional[float] = None) -> float:
    """exp(-lambda c1 (beta1^(2/alpha) + beta2^(2/alpha))), the FKG lower bound."""
    return math.exp(log_joint_success_lower(nd, th, alpha))


def joint_success_upper(nd, th: SirThresholds, alpha: Optional[float] = None) -> float:
    """exp(-lambda c2 (beta1^(2/alpha) + beta2^(2/alpha))), the Cauchy-Schwarz upper bound."""
    return math.exp(log_joint_success_upper(nd, th, alpha))


def one_way_success(nd, beta: float, alpha: float) -> float:
    """Exact one-way success probability exp(-lambda c1 beta^(2/alpha))."""
    alpha = validate_alpha(alpha)
    if beta is None or math.isnan(beta) or beta < 0:
        raise InvalidParameterError("beta", f"must be a non-negative threshold, got {beta!r}")
    return math.exp(-_density_value(nd) * interference_constant_lower(alpha) * beta ** (2.0 / alpha))


def density_interval_at_outage(ot: OutageTarget, th: SirThresholds,
                               alpha: Optional[float] = None) -> Tuple[float, float]:
    """Densities at which the lower (c1) and upper (c2) success bounds equal 1 - eps.

    Returns (lambda_lower, lambda_upper).
    """
    alpha = _resolve_alpha(th, alpha)
    s = th.power_sum(alpha)
    if s == 0:
        raise UnboundedDensityError("both thresholds are zero; every density meets the outage target")
    budget = ot.neg_log_success
    lam_lower = budget / (interference_constant_lower(alpha) * s)
    lam_upper = budget / (interference_constant_upper(alpha) * s)
    return lam_lower, lam_upper


def tc_from_density(eps: float, lam: float, b_total: float, f_total: float) -> float:
    """Transmission capacity (1 - eps) * lambda * B / F in bits/sec/Hz/m^2."""
    return (1.0 - eps) * lam * b_total / f_total


def tc_interval(ot: OutageTarget, traffic: TrafficSpec, split: BandwidthSplit,
                pl: PathLoss) -> CapacityInterval:
    """Two-way transmission capacity bounds at outage eps.

    Uses -(1 - eps) ln(1 - eps), the positive form, in both bounds.
    """
    th = thresholds_for(traffic, split, pl)
    lam_lower, lam_upper = density_interval_at_outage(ot, th, pl.alpha)
    interval = CapacityInterval(
        lower=tc_from_density(ot.eps, lam_lower, traffic.b_total, split.f_total),
        upper=tc_from_density(ot.eps, lam_upper, traffic.b_total, split.f_total),
        c1=interference_constant_lower(pl.alpha),
        c2=interference_constant_upper(pl.alpha),
        alpha=pl.alpha,
    )
    logger.debug(f"tc_interval eps={ot.eps}: [{interval.lower:.6e}, {interval.upper:.6e}]")
    return interval


def oneway_tc(ot: OutageTarget, b_total: float, f_total: float, pl: PathLoss) -> float:
    """Exact one-way transmission capacity carrying b_total bits over the whole band."""
    beta = sir_threshold(b_total, f_total, pl)
    if beta == 0:
        raise UnboundedDensityError("zero rate demand gives an unbounded one-way density")
    lam = ot.neg_log_success / (interference_constant_lower(pl.alpha) * beta ** pl.delta)
    return tc_from_density(ot.eps, lam, b_total, f_total)
