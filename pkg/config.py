"""
Configuration settings for the ABH beam laboratory
"""
import os
from pathlib import Path

from dotenv import load_dotenv

# Base directory
BASE_DIR = Path(__file__).parent

load_dotenv(BASE_DIR / ".env")

# Output and profile directories
OUTPUT_FOLDER = BASE_DIR / "output"
PROFILES_FOLDER = BASE_DIR / "profiles"
DEFAULT_CONFIG = PROFILES_FOLDER / "baseline.cfg"


def _worker_cap() -> int:
    """Worker count from ABHLAB_THREADS, falling back to the CPU count"""
    fallback = os.cpu_count() or 4
    raw = os.environ.get("ABHLAB_THREADS", "").strip()
    if not raw:
        return fallback
    try:
        value = int(raw)
    except ValueError:
        return fallback
    return value if value > 0 else fallback


# Processing settings
MAX_WORKERS = _worker_cap()  # Number of threads for sweeps

# Solver settings
DEFAULT_BASIS_SIZE = 140
MIN_BASIS_SIZE = 4
QUADRATURE_MARGIN = 10  # Extra Gauss nodes per segment over the basis size
RESONANCE_CONDITION_LIMIT = 1e12
RESIDUAL_LIMIT = 1e-8
REFINEMENT_STEPS = 3
RIGID_BODY_COUNT = 2
DEFAULT_MODE_COUNT = 30
CONVERGENCE_TOLERANCE = 1e-3

# Analysis window (uniform section, 5 mm pitch)
DEFAULT_WINDOW = (0.05, 1.0)
DEFAULT_STATIONS = 191
DEFAULT_PERIODS = 8
DEFAULT_SAMPLES_PER_PERIOD = 32
DEFAULT_ZERO_PAD = 4
DEFAULT_FREQUENCY_HZ = 7000.0
MIN_STATIONS = 32
MIN_SAMPLES_PER_PERIOD = 16
NEAR_FIELD_DECAYS = 3.0  # Evanescent decay lengths skipped past the force; 0 keeps every station

# Sweep defaults
DEFAULT_FREQUENCY_AXIS = "frequency_hz=1000:10000:200log"
DEFAULT_BANDS = "1000:4000,4000:10000"
SWEEP_BOUNDS = {
    "eta": (0.001, 0.5),
    "power_m": (1.0, 10.0),
    "taper_fraction": (0.0, 0.5),
}

# Output formatting
CSV_PRECISION = 17

# Application settings
APP_NAME = "abhlab"
APP_VERSION = "1.0.0"
