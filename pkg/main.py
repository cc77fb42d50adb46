#!/usr/bin/env python3
"""
Two-way transmission capacity toolkit - command-line entry point
Reproduces the capacity-bound, simulation, allocation and feedback experiments as CSV
"""

import argparse
import logging
import math
import sys
import time
from typing import Dict, List, Optional, Tuple

from allocation import AllocationProblem, allocation_sweep, optimal_split
from analytic_bounds import (
    OutageTarget, joint_success_lower, joint_success_upper, tc_from_density, tc_interval, thresholds_for,
)
from config import (
    DEBUG_MODE, DEFAULT_SEED, DEFAULT_TRIALS, EXIT_CONFIG_ERROR, EXIT_FAILURE, EXIT_NON_CONVERGENCE, EXIT_OK,
    LOG_FILE, LOG_FORMAT, max_threads,
)
from data_manager import ResultsManager, export_summary
from errors import (
    ConfigError, InvalidParameterError, SimulationNonConvergence, TwoWayCapacityError, UnboundedDensityError,
    VacuousBoundError,
)
from experiment_config import ExperimentConfig, load_config
from feedback_bounds import feedback_bound, feedback_threshold, genie_tc_oneway, quantization_gain
from montecarlo import (
    SimRegion, TrialPlan, check_region, estimate_beamforming_density_at_outage, estimate_density_at_outage,
    estimate_joint_success,
)

logger = logging.getLogger(__name__)

BOUNDS_COLUMNS = ['epsilon', 'tc_lower', 'tc_upper']
SIMULATE_EPS_COLUMNS = ['epsilon', 'lambda', 'p_joint', 'p_fwd', 'p_rev', 'ci', 'tc_mc']
SIMULATE_LAMBDA_COLUMNS = ['lambda', 'p_joint', 'p_fwd', 'p_rev', 'ci', 'tc_mc', 'p_lower', 'p_upper']
ALLOCATE_COLUMNS = ['f_tr', 'tc_lower', 'objective']
FEEDBACK_COLUMNS = ['tc_lower_feedback', 'tc_oneway_genie', 'tc_mc']


def setup_logging(debug: bool = False):
    """Configure root logging once: stdout plus an optional log file."""
    handlers = [logging.StreamHandler(sys.stdout)]
    if LOG_FILE:
        handlers.append(logging.FileHandler(LOG_FILE))
    logging.basicConfig(
        level=logging.DEBUG if (debug or DEBUG_MODE) else logging.INFO,
        format=LOG_FORMAT,
        handlers=handlers,
    )


def _require(config: ExperimentConfig, problems: List[str]):
    if problems:
        raise ConfigError(problems, config.scenario)


def _plan(config: ExperimentConfig) -> TrialPlan:
    return config.plan or TrialPlan(n_trials=DEFAULT_TRIALS, master_seed=DEFAULT_SEED)


def _region(config: ExperimentConfig) -> SimRegion:
    return config.region or SimRegion(d=config.path_loss.d)


def cmd_bounds(config: ExperimentConfig) -> List[Dict]:
    """Analytic lower/upper two-way capacity over the epsilon grid."""
    _require(config, [] if config.eps_grid else ["eps_grid: required by the bounds command"])
    rows = []
    for eps in config.eps_grid:
        interval = tc_interval(OutageTarget(eps), config.traffic, config.split, config.path_loss)
        rows.append({'epsilon': eps, 'tc_lower': interval.lower, 'tc_upper': interval.upper})
    return rows


def cmd_simulate(config: ExperimentConfig, threads: Optional[int] = None) -> Tuple[List[str], List[Dict]]:
    """Monte Carlo joint success over a lambda grid, or simulated capacity over an epsilon grid."""
    lambda_grid = config.lambda_grid
    if not lambda_grid and not config.eps_grid and config.density is not None:
        lambda_grid = [config.density.lam]
    _require(config, [] if (config.eps_grid or lambda_grid)
             else ["eps_grid, lambda_grid or NetworkDensity: required by the simulate command"])
    plan, region = _plan(config), _region(config)
    th = thresholds_for(config.traffic, config.split, config.path_loss)
    b_total, f_total = config.traffic.b_total, config.split.f_total
    logger.info(f"Simulating '{config.scenario}': beta1={th.beta1:.4f}, beta2={th.beta2:.4f}, "
                f"{plan.n_trials} trials in blocks of {plan.block_size} (seed {plan.master_seed}), "
                f"region radius {region.radius} m")

    rows = []
    if lambda_grid:
        for lam in lambda_grid:
            est = estimate_joint_success(lam, th, plan, region, threads=threads)
            rows.append({
                'lambda': lam,
                'p_joint': est.joint.p_hat,
                'p_fwd': est.fwd.p_hat,
                'p_rev': est.rev.p_hat,
                'ci': est.joint.ci_halfwidth,
                'tc_mc': tc_from_density(1.0 - est.joint.p_hat, lam, b_total, f_total),
                'p_lower': joint_success_lower(lam, th),
                'p_upper': joint_success_upper(lam, th),
            })
        columns, check_lam = SIMULATE_LAMBDA_COLUMNS, max(lambda_grid)
    else:
        for eps in config.eps_grid:
            lam_hat = estimate_density_at_outage(eps, th, plan, region, threads=threads)
            est = estimate_joint_success(lam_hat, th, plan, region, threads=threads)
            rows.append({
                'epsilon': eps,
                'lambda': lam_hat,
                'p_joint': est.joint.p_hat,
                'p_fwd': est.fwd.p_hat,
                'p_rev': est.rev.p_hat,
                'ci': est.joint.ci_halfwidth,
                'tc_mc': tc_from_density(eps, lam_hat, b_total, f_total),
            })
        columns, check_lam = SIMULATE_EPS_COLUMNS, max(r['lambda'] for r in rows)

    if config.check_region:
        check = check_region(check_lam, th, plan, region, threads=threads)
        logger.info(f"Region check at lambda={check_lam:.4e}: shift {check.shift:.5f} "
                    f"({'ok' if check.ok else 'too large'})")
    return columns, rows


def cmd_allocate(config: ExperimentConfig) -> Tuple[List[Dict], Dict]:
    """Capacity-versus-allocation sweep and the optimal/proportional summary."""
    _require(config, [] if config.outage else ["OutageTarget: required by the allocate command"])
    problem = AllocationProblem.from_alpha(config.traffic, config.split.f_total, config.path_loss.alpha)
    result = optimal_split(problem)
    rows = allocation_sweep(problem, config.outage, config.path_loss, config.allocation_points)
    summary = {
        'x_star': result.f_tr_star,
        'x_prop': result.f_tr_prop,
        'gain': result.gain_vs_proportional,
        'objective_at_star': result.objective_at_star,
        'residual': result.residual,
    }
    logger.info(f"Optimal forward band {result.f_tr_star:.2f} Hz vs proportional {result.f_tr_prop:.2f} Hz; "
                f"gain {100 * result.gain_vs_proportional:.1f}%")
    return rows, summary


def _feedback_row(config: ExperimentConfig, eps: float, b_fb: int, threads: Optional[int]) -> Dict:
    ot = OutageTarget(eps)
    fs = config.feedback.with_bits(b_fb)
    ac, pl, split = config.antennas, config.path_loss, config.split
    genie = genie_tc_oneway(ot, config.traffic.b_tr, split.f_total, ac, pl, config.convention)
    try:
        bound = feedback_bound(ot, config.traffic, split, fs, ac, pl, config.convention)
        tc_lower = bound.tc_lower
    except VacuousBoundError as e:
        if config.b_grid:
            logger.info(f"B={b_fb}: {e}")
            return {'tc_lower_feedback': 0.0, 'tc_oneway_genie': genie, 'tc_mc': 0.0}
        raise

    tc_mc = math.nan
    if config.plan is not None:
        lam_guess = tc_lower * split.f_total / ((1.0 - eps) * config.traffic.b_tr)
        beta1 = thresholds_for(config.traffic, split, pl).beta1
        lam_hat = estimate_beamforming_density_at_outage(
            eps, beta1, feedback_threshold(fs, split.f_rt, pl), quantization_gain(fs, ac), ac.n,
            config.plan, _region(config), pl.alpha, lam_guess, codebook=config.codebook, b_fb=b_fb,
            threads=threads,
        )
        tc_mc = tc_from_density(eps, lam_hat, config.traffic.b_tr, split.f_total)
    return {'tc_lower_feedback': tc_lower, 'tc_oneway_genie': genie, 'tc_mc': tc_mc}


def cmd_feedback(config: ExperimentConfig, threads: Optional[int] = None) -> Tuple[List[str], List[Dict]]:
    """Limited-feedback lower bound, genie one-way capacity and (with a TrialPlan) simulated capacity."""
    problems = []
    if config.antennas is None:
        problems.append("AntennaConfig: required by the feedback command")
    if config.feedback is None:
        problems.append("FeedbackSpec: required by the feedback command")
    if not (config.eps_grid or config.b_grid):
        problems.append("eps_grid or b_grid: required by the feedback command")
    if config.b_grid and config.outage is None:
        problems.append("OutageTarget: required by a b_grid sweep")
    _require(config, problems)
    if config.plan is not None:
        logger.info(f"Simulating '{config.scenario}': {config.plan.n_trials} trials in blocks of "
                    f"{config.plan.block_size} (seed {config.plan.master_seed}), codebook {config.codebook}")
        if config.feedback.feedback_array_gain:
            logger.warning("FeedbackSpec.feedback_array_gain=true charges the single-antenna feedback link "
                           "with the array constant; the bound can exceed the simulated capacity")

    rows = []
    if config.b_grid:
        for b in config.b_grid:
            rows.append({'b_fb': b, **_feedback_row(config, config.outage.eps, b, threads)})
        return ['b_fb'] + FEEDBACK_COLUMNS, rows
    for eps in config.eps_grid:
        rows.append({'epsilon': eps, **_feedback_row(config, eps, config.feedback.b_fb, threads)})
    return ['epsilon'] + FEEDBACK_COLUMNS, rows


def main(args) -> int:
    """Main execution function."""
    start_time = time.time()
    try:
        if args.threads is not None and args.threads < 1:
            raise ConfigError([f"--threads: must be >= 1, got {args.threads}"], args.config)
        threads = args.threads if args.threads is not None else max_threads()
        config = load_config(args.config)
        if args.trials is not None or args.seed is not None:
            config = config.with_plan(n_trials=args.trials, master_seed=args.seed)
        out = args.out or config.output
        if not out:
            raise ConfigError(["output: give --out or an output field"], args.config)

        logger.info(f"=== {args.command}: {config.scenario} ===")
        if args.command == 'bounds':
            results = ResultsManager(BOUNDS_COLUMNS)
            results.add_rows(cmd_bounds(config))
        elif args.command == 'simulate':
            columns, rows = cmd_simulate(config, threads)
            results = ResultsManager(columns)
            results.add_rows(rows)
        elif args.command == 'allocate':
            rows, summary = cmd_allocate(config)
            results = ResultsManager(ALLOCATE_COLUMNS)
            results.add_rows(rows)
            export_summary(summary, out)
        else:
            columns, rows = cmd_feedback(config, threads)
            results = ResultsManager(columns)
            results.add_rows(rows)
        results.export_to_csv(out)

    except ConfigError as e:
        for problem in e.problems:
            logger.error(f"Config error: {problem}")
        return EXIT_CONFIG_ERROR
    except (InvalidParameterError, UnboundedDensityError, VacuousBoundError) as e:
        logger.error(f"Invalid parameters: {e}")
        return EXIT_CONFIG_ERROR
    except SimulationNonConvergence as e:
        logger.error(f"Simulation did not converge: {e}")
        return EXIT_NON_CONVERGENCE
    except TwoWayCapacityError as e:
        logger.error(f"Run failed: {e}")
        return EXIT_FAILURE

    logger.info(f"Done in {time.time() - start_time:.1f}s")
    return EXIT_OK


def parse_arguments(argv=None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog='twoway-tc',
        description='Two-way transmission capacity of Poisson ad-hoc networks',
        epilog='Examples:\n'
               '  twoway-tc bounds --config configs/fig2.json --out results/fig2_bounds.csv\n'
               '  twoway-tc simulate --config configs/fig2.json --out results/fig2_mc.csv --trials 100000\n'
               '  twoway-tc allocate --config configs/fig4.json --out results/fig4.csv\n'
               '  twoway-tc feedback --config configs/fig5.json --out results/fig5.csv',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument(
        'command',
        choices=['bounds', 'simulate', 'allocate', 'feedback'],
        help='Experiment to run'
    )
    parser.add_argument(
        '--config',
        required=True,
        help='Experiment config JSON file'
    )
    parser.add_argument(
        '--out',
        help='Output CSV path (default: the config output field)'
    )
    parser.add_argument(
        '--seed',
        type=int,
        help='Override the TrialPlan master seed'
    )
    parser.add_argument(
        '--trials',
        type=int,
        help='Override the TrialPlan trial count'
    )
    parser.add_argument(
        '--threads',
        type=int,
        help='Worker threads for Monte Carlo blocks (default: TWOWAY_TC_THREADS or CPU count)'
    )
    parser.add_argument(
        '--debug',
        action='store_true',
        help='Enable debug logging'
    )
    return parser.parse_args(argv)


def run():
    args = parse_arguments()
    setup_logging(args.debug)
    try:
        sys.exit(main(args))
    except KeyboardInterrupt:
        logger.info("Run interrupted by user")
        sys.exit(EXIT_FAILURE)


if __name__ == "__main__":
    run()
