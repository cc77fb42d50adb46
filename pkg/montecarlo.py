"""Monte Carlo simulator for the two-way success probability.

The typical receiver Rx0 sits at the origin and its transmitter Tx0 at (d, 0).
Interfering transmitters form a PPP on a disk centered at the pair midpoint;
each interferer's receiver sits at distance d in a uniform random direction, so
one point process drives both bands and the forward/reverse interference stays
correlated. Fades are drawn independently per band.

Trials run in fixed-size blocks. Each block draws from its own substream keyed
by (master_seed, block_index), so estimates do not depend on how many threads
work through the blocks. Within a block, trials are drawn in chunks sized so that
no chunk expects more than MAX_CHUNK_POINTS interferers, which bounds memory per
worker at any density.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np

from analytic_bounds import OutageTarget, SirThresholds, density_interval_at_outage, validate_alpha
from config import (
    BLOCK_SIZE, CI_Z, DENSITY_CEILING_FACTOR, DENSITY_MAX_ITER, DENSITY_REL_TOL, MAX_CHUNK_POINTS,
    MIN_REGION_RADIUS, REGION_RADIUS_FACTOR, RVQ_MAX_BITS, TRUNCATION_TOLERANCE, max_threads,
)
from errors import InvalidParameterError, SimulationNonConvergence

logger = logging.getLogger(__name__)

CODEBOOK_MODES = ("gamma", "rvq")


@dataclass(frozen=True)
class SimRegion:
    """Simulation disk of the given radius around the typical pair (separation d)."""
    d: float
    radius: Optional[float] = None

    def __post_init__(self):
        if self.d is None or not math.isfinite(self.d) or self.d <= 0:
            raise InvalidParameterError("d", f"must be positive, got {self.d!r}")
        if self.radius is None:
            object.__setattr__(self, 'radius', max(REGION_RADIUS_FACTOR * self.d, MIN_REGION_RADIUS))
        if not math.isfinite(self.radius) or self.radius < REGION_RADIUS_FACTOR * self.d:
            raise InvalidParameterError("radius", f"must be at least {REGION_RADIUS_FACTOR:g} * d "
                                                  f"= {REGION_RADIUS_FACTOR * self.d}, got {self.radius}")

    @property
    def area(self) -> float:
        return math.pi * self.radius ** 2

    @property
    def center(self) -> Tuple[float, float]:
        return self.d / 2.0, 0.0

    def doubled(self) -> "SimRegion":
        return SimRegion(d=self.d, radius=2.0 * self.radius)


@dataclass(frozen=True)
class TrialPlan:
    """Trial count and the master seed every substream derives from."""
    n_trials: int
    master_seed: int
    block_size: int = BLOCK_SIZE

    def __post_init__(self):
        if not isinstance(self.n_trials, int) or self.n_trials < 1:
            raise InvalidParameterError("n_trials", f"must be an integer >= 1, got {self.n_trials!r}")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2 ** 64:
            raise InvalidParameterError("master_seed", f"must be an unsigned 64-bit integer, got {self.master_seed!r}")
        if self.block_size < 1:
            raise InvalidParameterError("block_size", f"must be >= 1, got {self.block_size}")

    def blocks(self) -> List[Tuple[int, int]]:
        """(block_index, trials_in_block) for every block."""
        full, rest = divmod(self.n_trials, self.block_size)
        sizes = [self.block_size] * full + ([rest] if rest else [])
        return list(enumerate(sizes))

    def block_rng(self, block_index: int) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(block_index,))
        return np.random.Generator(np.random.PCG64(seq))


@dataclass
class PairSample:
    """Interfering pairs: tx_points[i] transmits to rx_points[i], at distance d."""
    tx_points: np.ndarray
    rx_points: np.ndarray
    d: float

    def __post_init__(self):
        self.tx_points = np.asarray(self.tx_points, dtype=float).reshape(-1, 2)
        self.rx_points = np.asarray(self.rx_points, dtype=float).reshape(-1, 2)
        if self.tx_points.shape != self.rx_points.shape:
            raise InvalidParameterError("rx_points", "needs one receiver per transmitter")
        gaps = np.hypot(*(self.tx_points - self.rx_points).T)
        if gaps.size and not np.allclose(gaps, self.d, rtol=1e-9, atol=1e-9):
            raise InvalidParameterError("rx_points", f"every pair must be {self.d} m apart")

    def __len__(self):
        return len(self.tx_points)

    @property
    def d_t(self) -> np.ndarray:
        """Distances from interfering transmitters to Rx0 (origin)."""
        return np.hypot(self.tx_points[:, 0], self.tx_points[:, 1])

    @property
    def d_r(self) -> np.ndarray:
        """Distances from interfering receivers to Tx0 at (d, 0)."""
        return np.hypot(self.rx_points[:, 0] - self.d, self.rx_points[:, 1])


@dataclass(frozen=True)
class TrialEstimate:
    """Success-probability estimate with its 95% normal-approximation half-width."""
    p_hat: float
    ci_halfwidth: float
    n_effective: int
    successes: int = 0

    @classmethod
    def from_counts(cls, successes: int, n: int) -> "TrialEstimate":
        p = successes / n
        return cls(p_hat=p, ci_halfwidth=CI_Z * math.sqrt(p * (1.0 - p) / n), n_effective=n,
                   successes=int(successes))


class JointEstimate(NamedTuple):
    joint: TrialEstimate
    fwd: TrialEstimate
    rev: TrialEstimate


class CorrelationReport(NamedTuple):
    p_joint: float
    p_product: float
    gap: float
    gap_halfwidth: float


class RegionCheck(NamedTuple):
    p_inner: float
    p_doubled: float
    shift: float
    ok: bool


@dataclass
class TrialFades:
    """Fade powers of one trial: signal h0/g0 and one entry per interfering pair."""
    h0: float
    g0: float
    h: np.ndarray = field(default_factory=lambda: np.empty(0))
    g: np.ndarray = field(default_factory=lambda: np.empty(0))


@dataclass
class BeamformingFades:
    """Beamforming trial draws: Gamma(N, 1) signal gain, single-entry feedback fade, projections."""
    signal_gain: float
    g0: float
    h: np.ndarray = field(default_factory=lambda: np.empty(0))
    g: np.ndarray = field(default_factory=lambda: np.empty(0))


@dataclass
class _Geometry:
    n: int
    trial_id: np.ndarray
    center_dist: np.ndarray
    d_t: np.ndarray
    d_r: np.ndarray
    marks: np.ndarray
    tx: np.ndarray
    rx: np.ndarray


def _resolve_threads(threads: Optional[int]) -> int:
    return max(1, int(threads if threads is not None else max_threads()))


def _sample_geometry(rng: np.random.Generator, ceiling: float, region: SimRegion, n: int) -> _Geometry:
    counts = rng.poisson(ceiling * region.area, size=n)
    m = int(counts.sum())
    cx, cy = region.center
    r = region.radius * np.sqrt(rng.random(m))
    theta = rng.uniform(0.0, 2.0 * math.pi, m)
    tx = np.column_stack((cx + r * np.cos(theta), cy + r * np.sin(theta)))
    phi = rng.uniform(0.0, 2.0 * math.pi, m)
    rx = tx + region.d * np.column_stack((np.cos(phi), np.sin(phi)))
    marks = rng.random(m)
    return _Geometry(
        n=n,
        trial_id=np.repeat(np.arange(n), counts),
        center_dist=r,
        d_t=np.hypot(tx[:, 0], tx[:, 1]),
        d_r=np.hypot(rx[:, 0] - region.d, rx[:, 1]),
        marks=marks,
        tx=tx,
        rx=rx,
    )


def chunk_sizes(size: int, ceiling: float, region: SimRegion) -> List[int]:
    """Split a block's trials into chunks expecting at most MAX_CHUNK_POINTS interferers each.

    Chunks depend only on (size, ceiling, region), so trials at a fixed ceiling are
    drawn from the block's substream in the same order for every lambda.
    """
    per_trial = ceiling * region.area
    step = size if per_trial <= 0 else max(1, min(size, int(MAX_CHUNK_POINTS // per_trial)))
    full, rest = divmod(size, step)
    return [step] * full + ([rest] if rest else [])


def _chunked(rng: np.random.Generator, size: int, ceiling: float, region: SimRegion,
             chunk_fn: Callable[[np.random.Generator, int], np.ndarray]) -> np.ndarray:
    return np.sum([chunk_fn(rng, n) for n in chunk_sizes(size, ceiling, region)], axis=0)


def sample_interferer_pairs(lam: float, region: SimRegion, rng: np.random.Generator) -> PairSample:
    """One draw of the interfering pairs: Poisson(lambda pi R^2) transmitters, receivers at distance d."""
    if lam is None or not math.isfinite(lam) or lam < 0:
        raise InvalidParameterError("lambda", f"must be non-negative, got {lam!r}")
    geo = _sample_geometry(rng, lam, region, 1)
    return PairSample(tx_points=geo.tx, rx_points=geo.rx, d=region.d)


def draw_fade_powers(count: int, rng: np.random.Generator) -> np.ndarray:
    """Rayleigh fade powers |CN(0,1)|^2, i.e. unit-mean exponentials."""
    if count < 0:
        raise InvalidParameterError("count", f"must be non-negative, got {count}")
    return rng.standard_exponential(count)


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def draw_projection_powers(count: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """|h^T b|^2 for h ~ CN(0, I_n) and an independent isotropic unit vector b."""
    if count < 0 or n < 1:
        raise InvalidParameterError("count", f"needs count >= 0 and n >= 1, got {count}, {n}")
    h = _complex_gaussian(rng, (count, n))
    b = _complex_gaussian(rng, (count, n))
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    return np.abs(np.sum(h * b, axis=1)) ** 2


def _link_ok(signal, beta: float, interference):
    """signal > beta * interference, with zero interference or a zero threshold always succeeding."""
    if beta == 0:
        return np.ones_like(np.asarray(interference), dtype=bool)
    with np.errstate(invalid='ignore', over='ignore'):
        return (interference == 0) | (signal > beta * interference)


def joint_success_trial(sample: PairSample, fades: TrialFades, beta1: float, beta2: float,
                        alpha: float) -> Tuple[bool, bool, bool]:
    """Forward, reverse and joint success of one trial."""
    i_tr = float(np.sum(sample.d_t ** -alpha * fades.h)) if len(sample) else 0.0
    i_rt = float(np.sum(sample.d_r ** -alpha * fades.g)) if len(sample) else 0.0
    fwd_ok = bool(_link_ok(fades.h0, beta1, i_tr))
    rev_ok = bool(_link_ok(fades.g0, beta2, i_rt))
    return fwd_ok, rev_ok, fwd_ok and rev_ok


def beamforming_trial(n_antennas: int, gamma: float, fades: BeamformingFades, sample: PairSample,
                      beta1: float, beta3: float, alpha: float) -> Tuple[bool, bool]:
    """Forward data link with quantized beamforming and single-entry feedback link of one trial."""
    if n_antennas < 1:
        raise InvalidParameterError("n_antennas", f"must be >= 1, got {n_antennas}")
    i_tr = float(np.sum(sample.d_t ** -alpha * fades.h)) if len(sample) else 0.0
    i_rt = float(np.sum(sample.d_r ** -alpha * fades.g)) if len(sample) else 0.0
    fwd_ok = bool(_link_ok(gamma * fades.signal_gain, beta1, i_tr))
    fb_ok = bool(_link_ok(fades.g0, beta3, i_rt))
    return fwd_ok, fb_ok


def _interference(geo: _Geometry, powers: np.ndarray, distances: np.ndarray, alpha: float,
                  keep: np.ndarray) -> np.ndarray:
    weights = np.where(keep, distances ** -alpha * powers, 0.0)
    return np.bincount(geo.trial_id, weights=weights, minlength=geo.n)


def _run_blocks(plan: TrialPlan, block_fn: Callable[[np.random.Generator, int], np.ndarray],
                threads: Optional[int]) -> np.ndarray:
    """Sum integer tallies returned by block_fn over all blocks of the plan."""
    blocks = plan.blocks()

    def run(block):
        index, size = block
        return np.asarray(block_fn(plan.block_rng(index), size), dtype=np.int64)

    workers = min(_resolve_threads(threads), len(blocks))
    if workers == 1:
        tallies = [run(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(run, blocks))
    return np.sum(tallies, axis=0)


def _check_density(lam: float, ceiling: Optional[float]) -> float:
    if lam is None or not math.isfinite(lam) or lam < 0:
        raise InvalidParameterError("lambda", f"must be non-negative, got {lam!r}")
    if ceiling is None:
        return lam
    if ceiling < lam:
        raise InvalidParameterError("ceiling", f"must be at least lambda={lam}, got {ceiling}")
    return ceiling


def _joint_counts(geo: _Geometry, fades: Tuple[np.ndarray, ...], keep_fraction: float,
                  thresholds: SirThresholds, alpha: float, radius_limit: Optional[float] = None) -> np.ndarray:
    h0, g0, h, g = fades
    keep = geo.marks < keep_fraction
    if radius_limit is not None:
        keep &= geo.center_dist <= radius_limit
    fwd = _link_ok(h0, thresholds.beta1, _interference(geo, h, geo.d_t, alpha, keep))
    rev = _link_ok(g0, thresholds.beta2, _interference(geo, g, geo.d_r, alpha, keep))
    return np.array([np.sum(fwd & rev), np.sum(fwd), np.sum(rev)])


def _draw_joint_block(rng: np.random.Generator, size: int, ceiling: float, region: SimRegion):
    geo = _sample_geometry(rng, ceiling, region, size)
    h = draw_fade_powers(len(geo.trial_id), rng)
    g = draw_fade_powers(len(geo.trial_id), rng)
    h0 = draw_fade_powers(size, rng)
    g0 = draw_fade_powers(size, rng)
    return geo, (h0, g0, h, g)


def _alpha_of(thresholds: SirThresholds, alpha: Optional[float]) -> float:
    if alpha is not None:
        return validate_alpha(alpha)
    if thresholds.alpha is None:
        raise InvalidParameterError("alpha", "thresholds carry no path-loss exponent")
    return thresholds.alpha


def estimate_joint_success(lam: float, thresholds: SirThresholds, plan: TrialPlan, region: SimRegion,
                           alpha: Optional[float] = None, ceiling: Optional[float] = None,
                           threads: Optional[int] = None) -> JointEstimate:
    """Joint, forward and reverse success estimates from the same trials.

    With a ceiling density the interferers are drawn at the ceiling and thinned
    to lambda, so for a fixed plan the estimates are monotone in lambda.
    """
    alpha = _alpha_of(thresholds, alpha)
    ceiling = _check_density(lam, ceiling)
    keep_fraction = lam / ceiling if ceiling > 0 else 0.0

    def chunk(rng, size):
        geo, fades = _draw_joint_block(rng, size, ceiling, region)
        return _joint_counts(geo, fades, keep_fraction, thresholds, alpha)

    def block(rng, size):
        return _chunked(rng, size, ceiling, region, chunk)

    n_joint, n_fwd, n_rev = _run_blocks(plan, block, threads)
    n = plan.n_trials
    estimate = JointEstimate(
        joint=TrialEstimate.from_counts(int(n_joint), n),
        fwd=TrialEstimate.from_counts(int(n_fwd), n),
        rev=TrialEstimate.from_counts(int(n_rev), n),
    )
    logger.debug(f"lambda={lam:.4e}: p_joint={estimate.joint.p_hat:.5f} p_fwd={estimate.fwd.p_hat:.5f} "
                 f"p_rev={estimate.rev.p_hat:.5f} (n={n})")
    return estimate


def _invert_density(target: float, success_at: Callable[[float, float], TrialEstimate],
                    lam_guess: float, rel_tol: float) -> float:
    """Bisection on lambda for success == target over a thinned ceiling process."""
    ceiling = DENSITY_CEILING_FACTOR * lam_guess
    for _ in range(DENSITY_MAX_ITER):
        if success_at(ceiling, ceiling).p_hat < target:
            break
        logger.info(f"Density ceiling {ceiling:.4e} still meets the target; doubling")
        ceiling *= 2.0
    else:
        raise SimulationNonConvergence(f"no density up to {ceiling:.4e} drops success below {target}")

    lo, hi = 0.0, ceiling
    for iteration in range(DENSITY_MAX_ITER):
        if hi - lo <= rel_tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if success_at(mid, ceiling).p_hat >= target:
            lo = mid
        else:
            hi = mid
    else:
        raise SimulationNonConvergence(f"density bracket [{lo:.4e}, {hi:.4e}] did not reach rel_tol={rel_tol}",
                                       lam=0.5 * (lo + hi))

    lam_hat = 0.5 * (lo + hi)
    final = success_at(lam_hat, ceiling)
    tolerance = max(final.ci_halfwidth, 1.0 / final.n_effective)
    if abs(final.p_hat - target) > tolerance:
        raise SimulationNonConvergence(
            f"success {final.p_hat:.5f} at lambda={lam_hat:.4e} is outside {target} +/- {tolerance:.5f}; "
            f"raise n_trials", lam=lam_hat)
    logger.info(f"Density at success {target}: {lam_hat:.5e} (bracket [{lo:.5e}, {hi:.5e}])")
    return lam_hat


def estimate_density_at_outage(eps: float, thresholds: SirThresholds, plan: TrialPlan, region: SimRegion,
                               rel_tol: float = DENSITY_REL_TOL, alpha: Optional[float] = None,
                               threads: Optional[int] = None) -> float:
    """Largest density whose simulated joint success still reaches 1 - eps."""
    if eps is None or not 0 < eps < 1:
        raise InvalidParameterError("eps", f"must lie strictly inside (0, 1), got {eps!r}")
    alpha = _alpha_of(thresholds, alpha)
    _, lam_upper = density_interval_at_outage(OutageTarget(eps), thresholds, alpha)

    def success_at(lam, ceiling):
        return estimate_joint_success(lam, thresholds, plan, region, alpha, ceiling, threads).joint

    return _invert_density(1.0 - eps, success_at, lam_upper, rel_tol)


def _signal_gains(rng: np.random.Generator, size: int, n_antennas: int, gamma: float,
                  codebook: str, b_fb: int) -> np.ndarray:
    if codebook == "gamma":
        return gamma * rng.standard_gamma(n_antennas, size)
    # random vector quantization: pick the best of 2^B random unit codewords
    n_words = 2 ** b_fb
    rows = max(1, MAX_CHUNK_POINTS // (n_words * n_antennas))
    gains = np.empty(size)
    for start in range(0, size, rows):
        stop = min(size, start + rows)
        h0 = _complex_gaussian(rng, (stop - start, 1, n_antennas))
        words = _complex_gaussian(rng, (stop - start, n_words, n_antennas))
        words /= np.linalg.norm(words, axis=2, keepdims=True)
        gains[start:stop] = np.max(np.abs(np.sum(np.conj(words) * h0, axis=2)) ** 2, axis=1)
    return gains


def estimate_beamforming_success(lam: float, beta1: float, beta3: float, gamma: float, n_antennas: int,
                                 plan: TrialPlan, region: SimRegion, alpha: float,
                                 codebook: str = "gamma", b_fb: int = 1, ceiling: Optional[float] = None,
                                 threads: Optional[int] = None) -> JointEstimate:
    """Joint, forward-data and feedback success estimates of the limited-feedback network.

    codebook="gamma" scales a Gamma(N, 1) gain by gamma; "rvq" simulates a random
    codebook of 2^b_fb unit vectors instead (gamma is then unused).
    """
    alpha = validate_alpha(alpha)
    if codebook not in CODEBOOK_MODES:
        raise InvalidParameterError("codebook", f"must be one of {CODEBOOK_MODES}, got {codebook!r}")
    if codebook == "rvq" and not 1 <= b_fb <= RVQ_MAX_BITS:
        raise InvalidParameterError("b_fb", f"rvq codebooks support 1..{RVQ_MAX_BITS} bits, got {b_fb}")
    if n_antennas < 1:
        raise InvalidParameterError("n_antennas", f"must be >= 1, got {n_antennas}")
    ceiling = _check_density(lam, ceiling)
    keep_fraction = lam / ceiling if ceiling > 0 else 0.0

    def chunk(rng, size):
        geo = _sample_geometry(rng, ceiling, region, size)
        m = len(geo.trial_id)
        h = draw_projection_powers(m, n_antennas, rng)
        g = draw_fade_powers(m, rng)
        signal = _signal_gains(rng, size, n_antennas, gamma, codebook, b_fb)
        g0 = draw_fade_powers(size, rng)
        keep = geo.marks < keep_fraction
        fwd = _link_ok(signal, beta1, _interference(geo, h, geo.d_t, alpha, keep))
        fb = _link_ok(g0, beta3, _interference(geo, g, geo.d_r, alpha, keep))
        return np.array([np.sum(fwd & fb), np.sum(fwd), np.sum(fb)])

    def block(rng, size):
        return _chunked(rng, size, ceiling, region, chunk)

    n_joint, n_fwd, n_fb = _run_blocks(plan, block, threads)
    n = plan.n_trials
    return JointEstimate(
        joint=TrialEstimate.from_counts(int(n_joint), n),
        fwd=TrialEstimate.from_counts(int(n_fwd), n),
        rev=TrialEstimate.from_counts(int(n_fb), n),
    )


def estimate_beamforming_density_at_outage(eps: float, beta1: float, beta3: float, gamma: float,
                                           n_antennas: int, plan: TrialPlan, region: SimRegion,
                                           alpha: float, lam_guess: float, codebook: str = "gamma",
                                           b_fb: int = 1, rel_tol: float = DENSITY_REL_TOL,
                                           threads: Optional[int] = None) -> float:
    """Largest density whose simulated beamforming two-way success reaches 1 - eps."""
    if eps is None or not 0 < eps < 1:
        raise InvalidParameterError("eps", f"must lie strictly inside (0, 1), got {eps!r}")
    if not lam_guess > 0:
        raise InvalidParameterError("lam_guess", f"must be positive, got {lam_guess}")

    def success_at(lam, ceiling):
        return estimate_beamforming_success(lam, beta1, beta3, gamma, n_antennas, plan, region, alpha,
                                            codebook, b_fb, ceiling, threads).joint

    return _invert_density(1.0 - eps, success_at, lam_guess, rel_tol)


def correlation_diagnostic(lam: float, thresholds: SirThresholds, plan: TrialPlan, region: SimRegion,
                           alpha: Optional[float] = None, threads: Optional[int] = None) -> CorrelationReport:
    """p_joint - p_fwd * p_rev with a delta-method 95% half-width."""
    est = estimate_joint_success(lam, thresholds, plan, region, alpha, threads=threads)
    n = plan.n_trials
    pj, pf, pr = est.joint.p_hat, est.fwd.p_hat, est.rev.p_hat
    gap = pj - pf * pr

    # per-trial influence z = J - pr*F - pf*R over the four outcome cells
    nj, nf, nr = est.joint.successes, est.fwd.successes, est.rev.successes
    cells = np.array([nj, nf - nj, nr - nj, n - nf - nr + nj], dtype=float) / n
    z = np.array([1.0 - pr - pf, -pr, -pf, 0.0])
    mean = float(np.dot(cells, z))
    var = max(0.0, float(np.dot(cells, z ** 2)) - mean ** 2)
    report = CorrelationReport(p_joint=pj, p_product=pf * pr, gap=gap, gap_halfwidth=CI_Z * math.sqrt(var / n))
    logger.info(f"Correlation gap at lambda={lam:.4e}: {gap:.5f} +/- {report.gap_halfwidth:.5f}")
    return report


def check_region(lam: float, thresholds: SirThresholds, plan: TrialPlan, region: SimRegion,
                 alpha: Optional[float] = None, tolerance: float = TRUNCATION_TOLERANCE,
                 threads: Optional[int] = None) -> RegionCheck:
    """Joint success on the region versus the doubled region, from the same doubled-region trials."""
    alpha = _alpha_of(thresholds, alpha)
    outer = region.doubled()

    def chunk(rng, size):
        geo, fades = _draw_joint_block(rng, size, lam, outer)
        inner = _joint_counts(geo, fades, 1.0, thresholds, alpha, radius_limit=region.radius)
        full = _joint_counts(geo, fades, 1.0, thresholds, alpha)
        return np.array([inner[0], full[0]])

    def block(rng, size):
        return _chunked(rng, size, lam, outer, chunk)

    n_inner, n_full = _run_blocks(plan, block, threads)
    p_inner, p_full = n_inner / plan.n_trials, n_full / plan.n_trials
    shift = abs(p_inner - p_full)
    check = RegionCheck(p_inner=p_inner, p_doubled=p_full, shift=shift, ok=shift < tolerance)
    if not check.ok:
        logger.warning(f"Region radius {region.radius} m shifts success by {shift:.5f} when doubled")
    return check
