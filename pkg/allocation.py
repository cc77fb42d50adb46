"""Optimal split of the total band between the forward and reverse directions.

At fixed outage and rates the two-way capacity is proportional to 1 / f(x) with

    f(x) = (2^(B_TR/x) - 1)^delta + (2^(B_RT/(F_total - x)) - 1)^delta,  delta = 2/alpha,

which is convex on (0, F_total). Its minimizer is the unique root of

    g(x) = h(B_TR/x) / B_TR - h(B_RT/(F_total - x)) / B_RT,  h(t) = t^2 2^t (2^t - 1)^(delta - 1),

since f'(x) = -delta ln2 g(x). All powers of two are handled in log space.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from scipy import optimize

from analytic_bounds import (
    BandwidthSplit, OutageTarget, PathLoss, TrafficSpec, tc_interval, validate_alpha,
)
from config import SOLVER_EDGE_FRACTION, SOLVER_MAX_ITER, SOLVER_TOL_FRACTION
from errors import BracketError, InvalidParameterError

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
EXP_LIMIT = 700.0  # exp() of anything larger is treated as +inf
RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class AllocationProblem:
    """Rates, total bandwidth and delta = 2/alpha of one allocation problem."""
    traffic: TrafficSpec
    f_total: float
    delta: float

    def __post_init__(self):
        if not math.isfinite(self.f_total) or self.f_total <= 0:
            raise InvalidParameterError("f_total", f"must be positive, got {self.f_total}")
        if not 0 < self.delta < 1:
            raise InvalidParameterError("delta", f"must lie strictly inside (0, 1), got {self.delta}")

    @classmethod
    def from_alpha(cls, traffic: TrafficSpec, f_total: float, alpha: float) -> "AllocationProblem":
        return cls(traffic=traffic, f_total=f_total, delta=2.0 / validate_alpha(alpha))

    def scaled(self, s: float) -> "AllocationProblem":
        """The same problem with rates and bandwidth multiplied by s."""
        traffic = TrafficSpec(b_tr=s * self.traffic.b_tr, b_rt=s * self.traffic.b_rt)
        return AllocationProblem(traffic=traffic, f_total=s * self.f_total, delta=self.delta)


@dataclass(frozen=True)
class AllocationResult:
    """Solver output; f_rt_star is the complement F_total - f_tr_star.

    residual is g(x*) normalized by the larger of its two terms.
    """
    f_tr_star: float
    f_rt_star: float
    objective_at_star: float
    residual: float
    f_tr_prop: float
    gain_vs_proportional: float
    iterations: int


def _log_pow2_minus_one(t: float) -> float:
    """log(2^t - 1) for t > 0 without overflow."""
    u = t * LN2
    if u > 30.0:
        return u + math.log1p(-math.exp(-u))
    return math.log(math.expm1(u))


def _safe_exp(v: float) -> float:
    return math.inf if v > EXP_LIMIT else math.exp(v)


def _log_h(t: float, delta: float) -> float:
    return 2.0 * math.log(t) + t * LN2 + (delta - 1.0) * _log_pow2_minus_one(t)


def h_kernel(t: float, delta: float) -> float:
    """h(t) = t^2 2^t (2^t - 1)^(delta - 1), with h(0) = 0."""
    if t is None or math.isnan(t) or t < 0:
        raise InvalidParameterError("t", f"must be non-negative, got {t!r}")
    if t == 0:
        return 0.0
    if math.isinf(t):
        return math.inf
    return _safe_exp(_log_h(t, delta))


def _check_interior(x: float, p: AllocationProblem) -> float:
    if x is None or not math.isfinite(x) or not 0 < x < p.f_total:
        raise InvalidParameterError("x", f"must lie strictly inside (0, {p.f_total}), got {x!r}")
    return float(x)


def _require_two_way(p: AllocationProblem):
    if p.traffic.b_rt <= 0:
        raise InvalidParameterError("b_rt", "the stationarity equation needs a positive reverse rate")


def _term(b: float, x: float, delta: float) -> float:
    """(2^(b/x) - 1)^delta, saturating to inf."""
    if b == 0:
        return 0.0
    return _safe_exp(delta * _log_pow2_minus_one(b / x))


def split_objective(x: float, p: AllocationProblem) -> float:
    """f(x); diverges at both ends of (0, F_total)."""
    x = _check_interior(x, p)
    return _term(p.traffic.b_tr, x, p.delta) + _term(p.traffic.b_rt, p.f_total - x, p.delta)


def _log_terms(x: float, p: AllocationProblem):
    b_tr, b_rt = p.traffic.b_tr, p.traffic.b_rt
    la = _log_h(b_tr / x, p.delta) - math.log(b_tr)
    lb = _log_h(b_rt / (p.f_total - x), p.delta) - math.log(b_rt)
    return la, lb


def split_derivative(x: float, p: AllocationProblem) -> float:
    """g(x); changes sign exactly once on (0, F_total), from + to -."""
    x = _check_interior(x, p)
    _require_two_way(p)
    la, lb = _log_terms(x, p)
    if max(la, lb) > EXP_LIMIT:
        if la == lb:
            return 0.0
        return math.inf if la > lb else -math.inf
    return math.exp(la) - math.exp(lb)


def _normalized_residual(x: float, p: AllocationProblem) -> float:
    la, lb = _log_terms(x, p)
    # (A - B) / max(A, B) evaluated from logs
    if la >= lb:
        return -math.expm1(lb - la)
    return math.expm1(la - lb)


def proportional_split(p: AllocationProblem) -> float:
    """F_total * B_TR / (B_TR + B_RT)."""
    return p.f_total * p.traffic.b_tr / p.traffic.b_total


def optimal_split(p: AllocationProblem, tol: Optional[float] = None) -> AllocationResult:
    """Bisection on g over [eta, F_total - eta]."""
    _require_two_way(p)
    if tol is None:
        tol = SOLVER_TOL_FRACTION * p.f_total
    if not tol > 0:
        raise InvalidParameterError("tol", f"must be positive, got {tol}")

    eta = SOLVER_EDGE_FRACTION * p.f_total
    lo, hi = eta, p.f_total - eta
    g_lo, g_hi = split_derivative(lo, p), split_derivative(hi, p)
    if not (g_lo > 0 > g_hi):
        raise BracketError(f"no sign change of g on [{lo}, {hi}]: g={g_lo}, {g_hi}")

    x_star, info = optimize.bisect(
        split_derivative, lo, hi, args=(p,), xtol=tol, maxiter=SOLVER_MAX_ITER, full_output=True,
    )
    residual = _normalized_residual(x_star, p)
    if abs(residual) > RESIDUAL_TOL:
        logger.warning(f"Allocation residual {residual:.3e} above {RESIDUAL_TOL:.0e}; tol={tol} may be too loose")

    x_prop = proportional_split(p)
    f_star = split_objective(x_star, p)
    gain = max(0.0, split_objective(x_prop, p) / f_star - 1.0)
    logger.debug(f"optimal_split: x*={x_star:.6f} Hz after {info.iterations} iterations, "
                 f"x_prop={x_prop:.6f} Hz, gain={gain:.4f}")
    return AllocationResult(
        f_tr_star=x_star,
        f_rt_star=p.f_total - x_star,
        objective_at_star=f_star,
        residual=residual,
        f_tr_prop=x_prop,
        gain_vs_proportional=gain,
        iterations=info.iterations,
    )


def allocation_gain(p: AllocationProblem) -> float:
    """f(x_prop) / f(x*) - 1: the capacity gain of the optimal split over the proportional one."""
    return optimal_split(p).gain_vs_proportional


def allocation_sweep(p: AllocationProblem, ot: OutageTarget, pl: PathLoss,
                     points: int = 199) -> List[Dict]:
    """Lower capacity bound and objective over an evenly spaced grid of forward bandwidths."""
    if points < 1:
        raise InvalidParameterError("points", f"must be at least 1, got {points}")
    rows = []
    for f_tr in np.linspace(0.0, p.f_total, points + 2)[1:-1]:
        split = BandwidthSplit(f_total=p.f_total, f_tr=float(f_tr))
        rows.append({
            'f_tr': float(f_tr),
            'tc_lower': tc_interval(ot, p.traffic, split, pl).lower,
            'objective': split_objective(float(f_tr), p),
        })
    return rows
