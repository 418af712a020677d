"""Far-field decay |(-Delta)^{alpha/2} g(x)| ~ |x|^{-n-alpha} for a centered bump g.

The grid solution is periodic, so the far field carries the images of the
kernel tail. The exponent is fitted with a periodized power law
    y(x) = A sum_{|m|<=M} |x + m L|^{-s} + c
along the positive first axis; the plain log-log slope is reported next to it.
"""

from __future__ import annotations

import itertools
import logging
from typing import Any

import numpy as np
from scipy import optimize

from morreygate.errors import FitError
from morreygate.grid import GridFunction, GridSpec, build_grid, sample
from morreygate.models import CaseRow, Comparison, DecayCase, SuiteConfig, SweepAxes
from morreygate.spectral import laplacian_power, lebesgue_multiplier_bound, split_majorant
from morreygate.suites.common import (
    HOMOGENEITY_SCALAR,
    SuiteContext,
    SuiteOutcome,
    criterion,
    finite_or_none,
    max_or_none,
    relative_gap,
)
from morreygate.sweep import run_cells
from morreygate.testfns import bump, scalar

logger = logging.getLogger(__name__)

NEAR_FIELD_FACTOR = 3.0
MIN_FIT_POINTS = 8
IMAGES = {1: 8, 2: 3, 3: 2}
SLOPE_SEARCH_HALF_WIDTH = 1.0
SLOPE_SEARCH_STEP = 0.01


def default_config() -> SuiteConfig:
    return SuiteConfig(
        suite="decay",
        sweep=SweepAxes(
            decay_cases=[
                DecayCase(n_dims=1, alpha=0.5, extent=128.0, points_per_axis=2048, bump_radius=1.0),
                DecayCase(n_dims=1, alpha=1.0, extent=128.0, points_per_axis=2048, bump_radius=1.0),
                DecayCase(n_dims=2, alpha=0.5, extent=128.0, points_per_axis=512, bump_radius=2.0),
            ]
        ),
    )


def far_field_ray(values: GridFunction, inner: float, outer: float) -> tuple[np.ndarray, np.ndarray]:
    """Real parts along the positive first axis for inner <= x <= outer; 1-D data averages x and -x."""
    spec = values.spec
    origin = spec.points_per_axis // 2
    axis = spec.axis()
    index = [slice(None)] + [origin] * (spec.n_dims - 1)
    line = np.real(values.values[tuple(index)])
    if spec.n_dims == 1:
        mirrored = line[(2 * origin - np.arange(spec.points_per_axis)) % spec.points_per_axis]
        line = 0.5 * (line + mirrored)
    keep = (axis >= inner) & (axis <= outer)
    return axis[keep], line[keep]


def _image_sum(x: np.ndarray, s: float, spec: GridSpec) -> np.ndarray:
    m_max = IMAGES.get(spec.n_dims, 2)
    total = np.zeros_like(x)
    for shift in itertools.product(range(-m_max, m_max + 1), repeat=spec.n_dims):
        first = x + shift[0] * spec.extent
        rest = sum((k * spec.extent) ** 2 for k in shift[1:])
        total += (first * first + rest) ** (-s / 2.0)
    return total


def _residual(s: float, x: np.ndarray, y: np.ndarray, spec: GridSpec) -> float:
    scale = np.abs(y)
    design = np.stack([_image_sum(x, s, spec) / scale, 1.0 / scale], axis=1)
    _, residual, _, _ = np.linalg.lstsq(design, y / scale, rcond=None)
    if residual.size:
        return float(residual[0])
    fitted = design @ np.linalg.lstsq(design, y / scale, rcond=None)[0]
    return float(np.sum((fitted - y / scale) ** 2))


def fit_exponent(x: np.ndarray, y: np.ndarray, spec: GridSpec, guess: float) -> float:
    """Decay exponent s of the periodized power law, by grid search then bounded refinement."""
    grid = np.arange(guess - SLOPE_SEARCH_HALF_WIDTH, guess + SLOPE_SEARCH_HALF_WIDTH, SLOPE_SEARCH_STEP)
    grid = grid[grid > 0]
    best = grid[int(np.argmin([_residual(s, x, y, spec) for s in grid]))]
    result = optimize.minimize_scalar(
        _residual,
        bounds=(best - SLOPE_SEARCH_STEP, best + SLOPE_SEARCH_STEP),
        args=(x, y, spec),
        method="bounded",
        options={"xatol": 1e-6},
    )
    return float(result.x)


def loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    magnitude = np.abs(y)
    keep = magnitude > 0
    slope, _ = np.polyfit(np.log(x[keep]), np.log(magnitude[keep]), 1)
    return float(slope)


def analyse(case: DecayCase, spec: GridSpec, *, amplitude: float = 1.0) -> dict[str, Any]:
    f = bump(radius=case.bump_radius)
    if amplitude != 1.0:
        f = scalar(f, amplitude)
    g = sample(f, spec)
    out = laplacian_power(g, case.alpha)
    inner = NEAR_FIELD_FACTOR * case.bump_radius
    outer = spec.extent / 4.0
    x, y = far_field_ray(out, inner, outer)
    if outer <= inner or x.size < MIN_FIT_POINTS:
        raise FitError(
            f"far-field annulus [{inner:g}, {outer:g}] holds {x.size} points on L={spec.extent:g}; "
            f"need {MIN_FIT_POINTS}"
        )
    expected = case.n_dims + case.alpha
    exponent = fit_exponent(x, y, spec, expected)
    near = out.abs()[spec.radius() <= inner]
    return {
        "slope": -exponent,
        "raw_slope": loglog_slope(x, y),
        "near_field_max": float(np.max(near)),
        "split": split_majorant(g, case.alpha)["value"],
        "lattice": lebesgue_multiplier_bound(g, case.alpha),
        "fit_points": int(x.size),
    }


def _case_label(case: DecayCase) -> str:
    return f"n={case.n_dims},alpha={case.alpha:g}"


def _cell(ctx: SuiteContext, case: DecayCase) -> dict[str, Any]:
    spec = build_grid(case.n_dims, case.extent, case.points_per_axis)
    if ctx.refine:
        spec = spec.refined()
    base = analyse(case, spec)
    doubled = analyse(case, spec.with_extent(2.0 * spec.extent))
    scaled = analyse(case, spec, amplitude=HOMOGENEITY_SCALAR)
    return {"case": case, "spec": spec, "base": base, "doubled": doubled, "scaled": scaled}


def run(ctx: SuiteContext) -> SuiteOutcome:
    config = ctx.config
    tol = ctx.tolerances
    cases = config.sweep.decay_cases
    if not cases:
        raise FitError("decay suite needs at least one (n, alpha) case")

    outcome = SuiteOutcome(origin_policy=None)
    results = run_cells(lambda case: _cell(ctx, case), cases, threads=ctx.threads)
    grids: dict[str, Any] = {}
    for result in results:
        case: DecayCase = result["case"]
        base, doubled, scaled = result["base"], result["doubled"], result["scaled"]
        label = _case_label(case)
        grids[label] = result["spec"].to_dict()
        expected = -(case.n_dims + case.alpha)
        outcome.rows.append(
            CaseRow(
                function_id=f"bump(r={case.bump_radius:g})",
                function_class="compact",
                params={"n": case.n_dims, "alpha": case.alpha},
                left=finite_or_none(base["slope"]),
                right=expected,
                ratio=finite_or_none(base["slope"] / expected),
                extra={
                    "raw_slope": finite_or_none(base["raw_slope"]),
                    "scaled_raw_slope": finite_or_none(scaled["raw_slope"]),
                    "doubled_box_slope": finite_or_none(doubled["slope"]),
                    "near_field_max": finite_or_none(base["near_field_max"]),
                    "split_majorant": finite_or_none(base["split"]),
                    "lattice_majorant": finite_or_none(base["lattice"]),
                },
            )
        )
        outcome.check(
            criterion(
                f"slope[{label}]",
                "fitted far-field slope minus -(n + alpha)",
                base["slope"] - expected,
                tol.slope,
                Comparison.ABS_LE,
            ),
            criterion(
                f"box-doubling[{label}]",
                "change of the fitted slope when L doubles at fixed spacing",
                doubled["slope"] - base["slope"],
                tol.slope_stability,
                Comparison.ABS_LE,
            ),
            criterion(
                f"near-field-split[{label}]",
                "near-field max / split-integral majorant",
                base["near_field_max"] / base["split"],
                1.0 + tol.discretization,
            ),
            criterion(
                f"near-field-lattice[{label}]",
                "near-field max / lattice majorant",
                base["near_field_max"] / base["lattice"],
                1.0 + tol.lattice,
            ),
            criterion(
                f"homogeneity[{label}]",
                "log-log slope unchanged when g is multiplied by a scalar",
                abs(scaled["raw_slope"] - base["raw_slope"]),
                tol.homogeneity,
            ),
        )
        outcome.stability[f"slope[{label}]"] = base["slope"]

    outcome.grid = grids
    outcome.corpus_classes = ["compact"]
    outcome.summary = {
        "slopes": {_case_label(r["case"]): r["base"]["slope"] for r in results},
        "raw_slopes": {_case_label(r["case"]): r["base"]["raw_slope"] for r in results},
        "doubled_box_slopes": {_case_label(r["case"]): r["doubled"]["slope"] for r in results},
        "max_slope_error": max_or_none(abs((r.left or 0.0) - (r.right or 0.0)) for r in outcome.rows),
        "max_doubling_shift": max_or_none(
            relative_gap(r["base"]["slope"], r["doubled"]["slope"]) for r in results
        ),
    }
    logger.debug("decay slopes %s", outcome.summary["slopes"])
    return outcome
