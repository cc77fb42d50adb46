"""Exceptions raised by the capacity, allocation and simulation modules."""

from typing import List, Optional


class TwoWayCapacityError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameterError(TwoWayCapacityError, ValueError):
    """An input violates its type invariant."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class UnboundedDensityError(TwoWayCapacityError):
    """Both SIR thresholds are zero, so any density meets the outage target."""


class VacuousBoundError(TwoWayCapacityError):
    """Quantization gain is not positive; more feedback bits are needed."""


class BracketError(TwoWayCapacityError):
    """The stationarity function shows no sign change on the search interval."""


class SimulationNonConvergence(TwoWayCapacityError):
    """Monte Carlo noise exceeds the bracket resolution of the density search."""

    def __init__(self, message: str, lam: Optional[float] = None):
        self.lam = lam
        super().__init__(message)


class ConfigError(TwoWayCapacityError):
    """An experiment config failed validation."""

    def __init__(self, problems: List[str], path: str = ""):
        self.problems = list(problems)
        self.path = path
        where = f" in {path}" if path else ""
        super().__init__(f"{len(self.problems)} config problem(s){where}: " + "; ".join(self.problems))
