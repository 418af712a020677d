"""Growth of the kernel constant of (-Delta)^{iu/2} and the gamma-function audits behind it."""

from __future__ import annotations

import math

import numpy as np

from morreygate.models import CaseRow, Comparison, SuiteConfig, SweepAxes
from morreygate.special import (
    calibrate_riesz_constant,
    complex_gamma,
    gamma_identity_residuals,
    kernel_constant,
    kernel_constant_bound_exponent,
    strip_points,
)
from morreygate.suites.common import SuiteContext, SuiteOutcome, criterion, finite_or_none, max_or_none
from morreygate.sweep import run_cells

STRIP_SAMPLES = 100
BAND_SAMPLES = 50

# (alpha, n) pairs whose Riesz normalisation is cross-checked by quadrature.
CALIBRATION_CASES = ((0.5, 1), (1.0, 2), (1.5, 3))


def default_config() -> SuiteConfig:
    return SuiteConfig(
        suite="kernel-constant",
        sweep=SweepAxes(dimensions=[1, 2, 3], u_fit_range=(10.0, 100.0), u_band_range=(1.0, 50.0)),
    )


def _classical_residual() -> float:
    checks = [
        (complex(complex_gamma(1.0)), 1.0),
        (complex(complex_gamma(0.5)), math.sqrt(math.pi)),
    ]
    worst = max(abs(value - exact) / abs(exact) for value, exact in checks)
    gi = complex(complex_gamma(1j))
    exact = math.pi / math.sinh(math.pi)
    return max(worst, abs(abs(gi) ** 2 - exact) / exact)


def _reflection_residual(points: np.ndarray) -> float:
    worst = 0.0
    for z in points:
        lhs = complex(complex_gamma(z)) * complex(complex_gamma(1.0 - z))
        rhs = math.pi / complex(np.sin(math.pi * z))
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def _band_rows(n: int, band: tuple[float, float]) -> tuple[list[CaseRow], float]:
    rows: list[CaseRow] = []
    conjugate = 0.0
    for u in np.linspace(band[0], band[1], BAND_SAMPLES):
        c_plus = kernel_constant(float(u), n)
        c_minus = kernel_constant(-float(u), n)
        conjugate = max(conjugate, abs(c_minus.magnitude - c_plus.magnitude) / c_plus.magnitude)
        normalised = c_plus.magnitude / (1.0 + abs(u)) ** (n / 2.0)
        rows.append(
            CaseRow(
                function_id=f"C(u), n={n}",
                function_class="constant",
                params={"u": float(u), "n": n},
                left=finite_or_none(c_plus.magnitude),
                right=finite_or_none((1.0 + abs(u)) ** (n / 2.0)),
                ratio=finite_or_none(normalised),
                extra={"magnitude_at_minus_u": finite_or_none(c_minus.magnitude)},
            )
        )
    return rows, conjugate


def run(ctx: SuiteContext) -> SuiteOutcome:
    config = ctx.config
    tol = ctx.tolerances
    dims = config.sweep.dimensions or [1, 2, 3]
    outcome = SuiteOutcome()

    slopes: dict[str, float] = {}
    bands: dict[str, list[float | None]] = {}
    conjugate_gap = 0.0
    for n, (rows, conjugate) in zip(dims, run_cells(lambda n: _band_rows(n, config.sweep.u_band_range), dims)):
        outcome.rows.extend(rows)
        conjugate_gap = max(conjugate_gap, conjugate)
        ratios = [r.ratio for r in rows if r.ratio is not None]
        bands[str(n)] = [min(ratios), max(ratios)] if ratios else [None, None]
        slope = kernel_constant_bound_exponent(n, config.sweep.u_fit_range)
        slopes[str(n)] = slope
        outcome.check(
            criterion(
                f"slope-n{n}",
                f"log-log slope of |C(u)| over u in {list(config.sweep.u_fit_range)} minus n/2",
                slope - n / 2.0,
                tol.kernel_slope,
                Comparison.ABS_LE,
            )
        )
        low, high = bands[str(n)]
        width = None if not low or high is None else high / low
        outcome.check(
            criterion(
                f"band-n{n}",
                "max/min of |C(u)|/(1+|u|)^{n/2} over the band range stays finite",
                width,
                tol.ratio_ceiling,
            )
        )

    residuals = gamma_identity_residuals(strip_points(STRIP_SAMPLES, config.corpus.seed))
    reflection = _reflection_residual(strip_points(STRIP_SAMPLES, config.corpus.seed + 1))
    classical = _classical_residual()
    calibrations = [calibrate_riesz_constant(alpha, n) for alpha, n in CALIBRATION_CASES]
    calibration_gap = max_or_none(c["relative_error"] for c in calibrations)

    outcome.summary = {
        "slopes": slopes,
        "bands": bands,
        "conjugate_symmetry_gap": conjugate_gap,
        "gamma_recurrence": residuals["recurrence"],
        "gamma_conjugate": residuals["conjugate"],
        "gamma_reflection": reflection,
        "gamma_classical": classical,
        "riesz_calibration": calibrations,
    }
    outcome.check(
        criterion("conjugate-symmetry", "| |C(-u)| - |C(u)| | / |C(u)| over the band", conjugate_gap, tol.exact),
        criterion("gamma-recurrence", "Gamma(z+1) = z Gamma(z) on the strip", residuals["recurrence"], tol.exact),
        criterion("gamma-conjugate", "Gamma(conj z) = conj Gamma(z) on the strip", residuals["conjugate"], tol.exact),
        criterion("gamma-reflection", "Gamma(z) Gamma(1-z) = pi / sin(pi z) on the strip", reflection, tol.exact),
        criterion("gamma-classical", "Gamma(1), Gamma(1/2) and |Gamma(i)|^2", classical, tol.exact),
        criterion(
            "riesz-calibration",
            "spatial and spectral Riesz potentials of a Gaussian at the origin agree",
            calibration_gap,
            tol.calibration,
        ),
    )
    outcome.stability = {f"slope_n{n}": v for n, v in slopes.items()}
    return outcome
