"""Experiment configuration loader for the figure-reproduction runs."""

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional

from analytic_bounds import BandwidthSplit, NetworkDensity, OutageTarget, PathLoss, TrafficSpec
from config import DEFAULT_SEED, DEFAULT_TRIALS, RVQ_MAX_BITS
from errors import ConfigError, InvalidParameterError
from feedback_bounds import CONVENTIONS, AntennaConfig, FeedbackSpec
from montecarlo import CODEBOOK_MODES, SimRegion, TrialPlan

logger = logging.getLogger(__name__)

SWEEP_AXES = ("eps_grid", "lambda_grid", "b_grid")
KNOWN_KEYS = {
    "scenario", "comment", "output", "PathLoss", "TrafficSpec", "BandwidthSplit", "OutageTarget",
    "NetworkDensity", "AntennaConfig", "FeedbackSpec", "TrialPlan", "SimRegion", "allocation_points",
    "convention", "codebook", "check_region",
} | set(SWEEP_AXES)


@dataclass
class ExperimentConfig:
    """One validated experiment run: the model, at most one sweep axis and the simulation plan."""
    scenario: str
    path_loss: PathLoss
    traffic: TrafficSpec
    split: BandwidthSplit
    outage: Optional[OutageTarget] = None
    density: Optional[NetworkDensity] = None
    antennas: Optional[AntennaConfig] = None
    feedback: Optional[FeedbackSpec] = None
    plan: Optional[TrialPlan] = None
    region: Optional[SimRegion] = None
    eps_grid: List[float] = field(default_factory=list)
    lambda_grid: List[float] = field(default_factory=list)
    b_grid: List[int] = field(default_factory=list)
    allocation_points: int = 199
    convention: str = "product"
    codebook: str = "gamma"
    check_region: bool = False
    output: str = ""
    comment: str = ""

    @property
    def sweep_axis(self) -> Optional[str]:
        for axis in SWEEP_AXES:
            if getattr(self, axis):
                return axis
        return None

    def with_plan(self, n_trials: Optional[int] = None, master_seed: Optional[int] = None) -> "ExperimentConfig":
        """Copy with the trial count and/or seed overridden (CLI --trials / --seed)."""
        plan = self.plan or TrialPlan(n_trials=DEFAULT_TRIALS, master_seed=DEFAULT_SEED)
        plan = TrialPlan(
            n_trials=plan.n_trials if n_trials is None else n_trials,
            master_seed=plan.master_seed if master_seed is None else master_seed,
        )
        return replace(self, plan=plan)


class _Collector:
    """Accumulates field-level problems so one run reports all of them."""

    def __init__(self):
        self.problems: List[str] = []

    def build(self, name: str, factory: Callable[..., Any], data: Any):
        if not isinstance(data, dict):
            self.problems.append(f"{name}: expected an object, got {type(data).__name__}")
            return None
        try:
            return factory(**data)
        except InvalidParameterError as e:
            self.problems.append(f"{name}.{e}")
        except TypeError as e:
            self.problems.append(f"{name}: {e}")
        return None

    def grid(self, name: str, values: Any, integer: bool = False) -> List:
        if not isinstance(values, list) or not values:
            self.problems.append(f"{name}: expected a non-empty list")
            return []
        kind = int if integer else (int, float)
        if not all(isinstance(v, kind) and not isinstance(v, bool) for v in values):
            self.problems.append(f"{name}: entries must be {'integers' if integer else 'numbers'}")
            return []
        if any(b <= a for a, b in zip(values, values[1:])):
            self.problems.append(f"{name}: must be strictly increasing")
            return []
        return list(values)


def parse_config(data: Dict[str, Any], path: str = "") -> ExperimentConfig:
    """Validate a decoded JSON document and build the ExperimentConfig."""
    if not isinstance(data, dict):
        raise ConfigError(["top level: expected a JSON object"], path)
    c = _Collector()

    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        c.problems.append(f"unknown field(s): {', '.join(unknown)}")
    for required in ("scenario", "PathLoss", "TrafficSpec", "BandwidthSplit"):
        if required not in data:
            c.problems.append(f"{required}: missing")
    if any(p.endswith("missing") for p in c.problems):
        raise ConfigError(c.problems, path)

    path_loss = c.build("PathLoss", PathLoss, data["PathLoss"])
    traffic = c.build("TrafficSpec", TrafficSpec, data["TrafficSpec"])
    split = c.build("BandwidthSplit", BandwidthSplit, data["BandwidthSplit"])
    outage = c.build("OutageTarget", OutageTarget, data["OutageTarget"]) if "OutageTarget" in data else None
    density = c.build("NetworkDensity", NetworkDensity, data["NetworkDensity"]) if "NetworkDensity" in data else None
    antennas = c.build("AntennaConfig", AntennaConfig, data["AntennaConfig"]) if "AntennaConfig" in data else None
    feedback = c.build("FeedbackSpec", FeedbackSpec, data["FeedbackSpec"]) if "FeedbackSpec" in data else None
    plan = c.build("TrialPlan", TrialPlan, data["TrialPlan"]) if "TrialPlan" in data else None

    region = None
    if "SimRegion" in data:
        if path_loss is None:
            c.problems.append("SimRegion: needs a valid PathLoss")
        else:
            region = c.build("SimRegion", lambda **kw: SimRegion(d=path_loss.d, **kw), data["SimRegion"])

    axes = [axis for axis in SWEEP_AXES if axis in data]
    if len(axes) > 1:
        c.problems.append(f"sweep: exactly one sweep axis per run, got {', '.join(axes)}")
    eps_grid = c.grid("eps_grid", data["eps_grid"]) if "eps_grid" in data else []
    if any(not 0 < e < 1 for e in eps_grid):
        c.problems.append("eps_grid: entries must lie strictly inside (0, 1)")
    lambda_grid = c.grid("lambda_grid", data["lambda_grid"]) if "lambda_grid" in data else []
    if any(lam < 0 for lam in lambda_grid):
        c.problems.append("lambda_grid: entries must be non-negative")
    b_grid = c.grid("b_grid", data["b_grid"], integer=True) if "b_grid" in data else []
    if any(b < 1 for b in b_grid):
        c.problems.append("b_grid: entries must be >= 1")

    points = data.get("allocation_points", 199)
    if not isinstance(points, int) or isinstance(points, bool) or points < 1:
        c.problems.append(f"allocation_points: must be an integer >= 1, got {points!r}")
    convention = data.get("convention", "product")
    if convention not in CONVENTIONS:
        c.problems.append(f"convention: must be one of {CONVENTIONS}, got {convention!r}")
    codebook = data.get("codebook", "gamma")
    if codebook not in CODEBOOK_MODES:
        c.problems.append(f"codebook: must be one of {CODEBOOK_MODES}, got {codebook!r}")
    if codebook == "rvq":
        bits = b_grid or ([feedback.b_fb] if feedback is not None else [])
        too_many = [b for b in bits if b > RVQ_MAX_BITS]
        if too_many:
            c.problems.append(f"codebook: rvq draws 2^B codewords per trial and supports at most "
                              f"{RVQ_MAX_BITS} feedback bits, got {max(too_many)}")
    if c.problems:
        raise ConfigError(c.problems, path)

    return ExperimentConfig(
        scenario=str(data["scenario"]),
        path_loss=path_loss,
        traffic=traffic,
        split=split,
        outage=outage,
        density=density,
        antennas=antennas,
        feedback=feedback,
        plan=plan,
        region=region,
        eps_grid=eps_grid,
        lambda_grid=lambda_grid,
        b_grid=b_grid,
        allocation_points=points,
        convention=convention,
        codebook=codebook,
        check_region=bool(data.get("check_region", False)),
        output=str(data.get("output", "")),
        comment=str(data.get("comment", "")),
    )


def load_config(path: str) -> ExperimentConfig:
    """Load and validate an experiment config JSON file."""
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError([f"file not found: {path}"], path)
    except json.JSONDecodeError as e:
        raise ConfigError([f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"], path)
    config = parse_config(data, path)
    logger.info(f"Loaded config '{config.scenario}' from {path} (sweep: {config.sweep_axis or 'none'})")
    return config
