"""
Configuration settings for the Lattice Parameter Tuner
"""
import os
import tempfile
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# =============================================================================
# APPLICATION SETTINGS
# =============================================================================
APP_NAME = "Lattice Parameter Tuner"
APP_VERSION = "1.0.0"
DEBUG = os.getenv("DEBUG", "false").lower() == "true"
LOG_LEVEL = "DEBUG" if DEBUG else os.getenv("TUNER_LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Only filesystem override besides the report path
TEMP_DIR = os.getenv("TUNER_TMPDIR") or tempfile.gettempdir()

PROJECT_ROOT = Path(__file__).resolve().parent
PRESETS_DIR = PROJECT_ROOT / "presets"

# =============================================================================
# SCHEMA VERSIONS
# =============================================================================
CONFIG_SCHEMA_VERSION = 1
REPORT_SCHEMA_VERSION = 1

# =============================================================================
# TUNING DEFAULTS
# =============================================================================
DEFAULT_ALPHA = 0.1
DEFAULT_BETA = 2.0          # FitSeries ignores it; Literal reads it as a fraction of T
DEFAULT_NUM_SAMPLE = 4
DEFAULT_NUM_REFINE = 7
DEFAULT_JOBS = 4            # four analysis processes per round
DEFAULT_SEED = 0

# Largest finite integer parameter value; additions saturate here
MAX_PARAM_INT = 2**63 - 1

# =============================================================================
# ANALYZER PROCESS SETTINGS
# =============================================================================
DEFAULT_TIMEOUT_GRACE_SECONDS = 2.0
DEFAULT_ACCEPTED_EXIT_CODES = [0]

# =============================================================================
# STRATEGY HARNESS
# =============================================================================
TIE_TOLERANCE = 0.01        # tied-best when count - min <= 0.01 * count
EXPERT_LADDER_STEPS = 12    # mirrors -eva-precision 0..11
STRATEGY_NAMES = ["default", "expert", "adaptive"]

# =============================================================================
# EXIT CODES
# =============================================================================
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_BASELINE_FAILED = 2
