"""
Configuration settings for the application.
"""
import os
from pathlib import Path

from dotenv import load_dotenv

from hessian_lv import __version__

# Load environment variables from .env file
env_path = Path(__file__).parent.parent / ".env"
load_dotenv(dotenv_path=env_path)

TOOL_VERSION = __version__

# Logging configuration
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()

# Worker pool used by grid sweeps
HESSIAN_LV_THREADS = max(1, int(os.getenv("HESSIAN_LV_THREADS", str(os.cpu_count() or 1))))

# Integrator defaults
REL_TOL = float(os.getenv("HESSIAN_LV_REL_TOL", "1e-10"))
ABS_TOL = float(os.getenv("HESSIAN_LV_ABS_TOL", "1e-12"))
T_MAX = float(os.getenv("HESSIAN_LV_T_MAX", "200"))
SINK_RADIUS = float(os.getenv("HESSIAN_LV_SINK_RADIUS", "1e-8"))
SADDLE_RADIUS = float(os.getenv("HESSIAN_LV_SADDLE_RADIUS", "1e-2"))
MAX_STEPS = int(os.getenv("HESSIAN_LV_MAX_STEPS", "1000000"))

# Reconstruction grid
GRID_POINTS = int(os.getenv("HESSIAN_LV_GRID_POINTS", "1000"))

# Numerical tolerances shared by several modules
CENTER_TOL = 1e-12  # relative, |q - q*| < CENTER_TOL * max(1, q)
CROSSING_TOL = 1e-10  # relative, level crossings
