"""Configuration settings for the two-way transmission capacity toolkit."""

import os

from dotenv import load_dotenv

from errors import ConfigError

load_dotenv()

# Path loss
ALPHA_GUARD = 1e-9  # alpha must exceed 2 + ALPHA_GUARD so csc(2*pi/alpha) stays finite

# Bandwidth allocation solver
SOLVER_EDGE_FRACTION = 1e-9  # bisection bracket is [eta, F_total - eta], eta = fraction * F_total
SOLVER_TOL_FRACTION = 1e-9   # default bracket width, relative to F_total
SOLVER_MAX_ITER = 200

# Limited feedback
DEFAULT_C3 = 0.5  # quantization-loss coefficient, only c3 < 1 is known

# Monte Carlo
CI_Z = 1.96  # 95% normal-approximation half-width
DEFAULT_TRIALS = 20000
DEFAULT_SEED = 20100601
BLOCK_SIZE = 256  # trials per substream; fixed so results do not depend on thread count
REGION_RADIUS_FACTOR = 20.0  # simulation disk radius is at least this many pair distances
MIN_REGION_RADIUS = 100.0  # meters
TRUNCATION_TOLERANCE = 1e-3  # max success shift allowed when the region radius doubles
DENSITY_REL_TOL = 1e-3
DENSITY_MAX_ITER = 60
DENSITY_CEILING_FACTOR = 1.25  # first ceiling of the density search, relative to its starting guess
MAX_CHUNK_POINTS = 250_000  # expected interferers (or codeword entries) drawn at once per worker
RVQ_MAX_BITS = 16

# Experiments / CLI
CONFIG_DIR = "configs"
CSV_LINE_TERMINATOR = "\n"
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NON_CONVERGENCE = 3

# Parallelism
DEFAULT_THREADS = os.cpu_count() or 1


def max_threads() -> int:
    """Worker-thread cap from TWOWAY_TC_THREADS, defaulting to the CPU count."""
    raw = os.getenv("TWOWAY_TC_THREADS", "").strip()
    if not raw:
        return DEFAULT_THREADS
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError([f"TWOWAY_TC_THREADS: must be an integer, got {raw!r}"])
    if value < 1:
        raise ConfigError([f"TWOWAY_TC_THREADS: must be >= 1, got {value}"])
    return value


# Logging / debug settings
DEBUG_MODE = os.getenv("DEBUG", "False").lower() == "true"
LOG_FILE = os.getenv("TWOWAY_TC_LOG_FILE", "")
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
