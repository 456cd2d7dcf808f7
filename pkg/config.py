"""
Configuration file for anyonlab
Contains all configuration variables and settings
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Base paths
BASE_DIR = Path(__file__).parent
RINGS_DIR = BASE_DIR / "rings"
FSYMBOLS_DIR = Path(os.getenv("FSYMBOLS_DIR", str(BASE_DIR / "fsymbols")))

# Create directories if they don't exist
FSYMBOLS_DIR.mkdir(parents=True, exist_ok=True)

# Application Settings
APP_NAME = "anyonlab"
APP_VERSION = "1.0.0"

# Solver Settings
MAX_COMPONENT_SIZE = int(os.getenv("MAX_COMPONENT_SIZE", "45"))
WORKERS = int(os.getenv("WORKERS", str(os.cpu_count() or 1)))
SOFT_MAX_TERMS = int(os.getenv("SOFT_MAX_TERMS", "20"))
GROEBNER_PAIR_LIMIT = int(os.getenv("GROEBNER_PAIR_LIMIT", "20000"))
SIGN_ENUMERATION_LIMIT = int(os.getenv("SIGN_ENUMERATION_LIMIT", "12"))

# Numerics
PRECISION_BITS = int(os.getenv("PRECISION_BITS", "128"))
UNITARITY_TOLERANCE = 1e-10

# Gate exploration
CLOSURE_CAP = int(os.getenv("CLOSURE_CAP", "5000"))
WEAVE_EXPONENTS = tuple(
    int(e) for e in os.getenv("WEAVE_EXPONENTS", "-4,-3,-2,-1,1,2,3,4").split(",")
)
WEAVE_MAX_LEN = 11
WEAVE_TOLERANCE = 1e-2

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE = BASE_DIR / "anyonlab.log"
