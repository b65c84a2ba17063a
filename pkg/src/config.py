import os
from dotenv import load_dotenv

load_dotenv()

# Sampling / sweeps
SEED = int(os.getenv("QCALC_SEED", 0))
DEFAULT_Q = float(os.getenv("QCALC_Q", 0.5))
RADIUS = float(os.getenv("QCALC_RADIUS", 0.5))
POLE_MARGIN = float(os.getenv("QCALC_POLE_MARGIN", 0.05))
POINTS = int(os.getenv("QCALC_POINTS", 25))
MAX_REJECTIONS = int(os.getenv("QCALC_MAX_REJECTIONS", 10000))

# Truncation policy
EPS = float(os.getenv("QCALC_EPS", 1e-10))
MAX_SERIES_TERMS = int(os.getenv("QCALC_MAX_SERIES_TERMS", 10000))
MAX_PRODUCT_TERMS = int(os.getenv("QCALC_MAX_PRODUCT_TERMS", 2000))
STALL_WINDOW = int(os.getenv("QCALC_STALL_WINDOW", 3))

# Paths
OUTPUT_DIR = os.getenv("OUTPUT_DIR", "data/output")

LOG_LEVEL = os.getenv("QCALC_LOG_LEVEL", "WARNING")

POLE_THRESHOLD = 1e-12
MIN_QUAD_NODES = 64
MAX_QUAD_NODES = 4096
MULTISUM_START = 8
Q_SAMPLE_RANGE = (0.1, 0.7)
EXPANSION_TOL = 1e-9
# Sampling guards
CANCELLATION_FLOOR = 1e-2
ENDPOINT_FRACTION = 0.25
