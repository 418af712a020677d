from __future__ import annotations

import math

REPORT_FILE = "report.json"
ROWS_FILE = "rows.csv"
NORMS_FILE = "norms.csv"
RUN_METADATA_FILE = "run-metadata.json"
SUMMARY_JSON_FILE = "summary.json"
SUMMARY_MD_FILE = "summary.md"
SETTINGS_FILE = "morreygate.toml"
DEFAULT_OUT_DIR = ".morreygate"

ENV_OUT_DIR = "MORREYGATE_OUT_DIR"
ENV_THREADS = "MORREYGATE_THREADS"

REPORT_VERSION = "1.0.0"

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_VERDICT_FAILURE = 2

DEFAULT_SETTINGS: dict[str, str | int] = {
    "out_dir": DEFAULT_OUT_DIR,
    "threads": 1,
}

# Ball ladder: r_m = h * (1 + offset) * ratio**m, until the box diameter is covered.
# (r_m / h)**2 = (16/9) 2**m is never an integer, so no rung is a lattice distance.
# A dilation by ratio**2 maps the ladder into itself.
BALL_RATIO = math.sqrt(2.0)
BALL_OFFSET = 1.0 / 3.0

# Effective support of a Gaussian, in units of sigma (e^{-r^2/2} < 1e-16).
GAUSSIAN_SUPPORT_SIGMAS = 8.6

# Corpus supports must stay this many cells away from the periodic seam.
SEAM_MARGIN_CELLS = 4

FFT_WORKERS = 1

DEFAULT_TOLERANCES: dict[str, float] = {
    "exact": 1e-12,
    "lattice": 1e-10,
    "isometry": 1e-9,
    "homogeneity": 1e-10,
    "discretization": 0.05,
    "refined_discretization": 0.025,
    "refine_drift": 0.10,
    "holder": 0.02,
    "slope": 0.2,
    "slope_stability": 0.05,
    "kernel_slope": 0.1,
    "trend": 0.05,
    "zero_mode": 0.10,
    "calibration": 1e-6,
    "ratio_ceiling": 1e6,
    "identity_limit": 0.02,
}


class SuiteId:
    IU_BOUND = "iu-bound"
    KERNEL_CONSTANT = "kernel-constant"
    INTERPOLATION = "interpolation"
    UNIFORM_LOCAL_BOUND = "uniform-local-bound"
    OLSEN = "olsen"
    HARDY = "hardy"
    DECAY = "decay"
    ROUNDTRIP = "roundtrip"
    HEISENBERG_SMALL = "heisenberg-small"
    HEISENBERG_GENERAL = "heisenberg-general"
