# src/traveling_wave_lab/config.py

from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv

# Load .env from project root automatically
env_path = Path(__file__).resolve().parents[2] / ".env"
load_dotenv(env_path)


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


# Outputs (CSV / JSON / SVG)
OUTPUT_DIR = Path(os.getenv("TWL_OUTPUT_DIR", "outputs"))
THREADS = int(os.getenv("TWL_THREADS", 1))

LOG_LEVEL = os.getenv("TWL_LOG_LEVEL", "WARNING").upper()
SHOW_PROGRESS = _env_bool("TWL_PROGRESS", False)

# Heat kernels: default number of FFT points (a power of two)
KERNEL_POINTS = int(os.getenv("TWL_KERNEL_POINTS", 2**14))

# Numerical tolerances
STRICTNESS_MARGIN = float(os.getenv("TWL_STRICTNESS_MARGIN", 1e-12))
OLEINIK_SAMPLES = int(os.getenv("TWL_OLEINIK_SAMPLES", 1000))
ODE_ATOL = float(os.getenv("TWL_ODE_ATOL", 1e-10))
QUAD_TOL = float(os.getenv("TWL_QUAD_TOL", 1e-6))
CROSSCHECK_TOL = float(os.getenv("TWL_CROSSCHECK_TOL", 1e-4))
SPEED_MATCH_TOL = float(os.getenv("TWL_SPEED_MATCH_TOL", 1e-4))
