import os
import datetime
import logging

from dotenv import load_dotenv

load_dotenv()


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logging.error(f"Invalid value for {name}: {raw!r}, using {default}")
        return default


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logging.error(f"Invalid value for {name}: {raw!r}, using {default}")
        return default


# Tolerances
PIV_RESIDUAL_TOL = _float_env("PIV_RESIDUAL_TOL", 1e-8)
SEED_RESIDUAL_TOL = _float_env("SEED_RESIDUAL_TOL", 1e-11)
SINGULARITY_RTOL = _float_env("SINGULARITY_RTOL", 1e-14)
HIERARCHY_TOL = _float_env("HIERARCHY_TOL", 1e-12)
KUMMER_MAX_TERMS = _int_env("KUMMER_MAX_TERMS", 500)
POTENTIAL_TOL = _float_env("POTENTIAL_TOL", 1e-9)
FD_RTOL = _float_env("FD_RTOL", 1e-6)
FD_STEP = _float_env("FD_STEP", 1e-3)
FD_NOISE_RTOL = _float_env("FD_NOISE_RTOL", 1e-9)

# Regularity scan
SCAN_X_LO = _float_env("SCAN_X_LO", -5.0)
SCAN_X_HI = _float_env("SCAN_X_HI", 5.0)
SCAN_GRID_N = _int_env("SCAN_GRID_N", 400)
SCAN_X_MAX = _float_env("SCAN_X_MAX", 16.0)

# CLI defaults
DEFAULT_SAMPLES = _int_env("DEFAULT_SAMPLES", 201)
WORKERS = _int_env("WORKERS", 1)
RUNS_DIR = os.getenv("RUNS_DIR", "runs")
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

_output_path = None


def set_output_path(path: str):
    global _output_path
    _output_path = path


def get_output_path() -> str:
    if _output_path is None:
        raise RuntimeError("Output path not set!")
    return _output_path


def setup_output_path(command: str, fmt: str) -> str:
    """Build a timestamped output path under RUNS_DIR and create the directory."""
    out_dir = os.path.join(os.getcwd(), RUNS_DIR)
    os.makedirs(out_dir, exist_ok=True)
    timestamp = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
    path = os.path.join(out_dir, f"{command}_{timestamp}.{fmt}")
    set_output_path(path)
    return path
