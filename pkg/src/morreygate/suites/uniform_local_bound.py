"""Local L^w(B) norms of (-Delta)^{alpha v/2} f, uniform in (v, w), against explicit majorants."""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from morreygate.grid import GridFunction, GridSpec, sample
from morreygate.models import CaseRow, Comparison, CorpusConfig, FunctionKind, GridConfig, SuiteConfig, SweepAxes
from morreygate.norms import ball_local_norm
from morreygate.spectral import laplacian_power, lebesgue_multiplier_bound, split_majorant, unit_ball_volume
from morreygate.suites.common import (
    SuiteContext,
    SuiteOutcome,
    classes_of,
    criterion,
    finite_or_none,
    finite_ratio,
    homogeneity_criterion,
    max_or_none,
    support_clearance,
)
from morreygate.sweep import run_cells
from morreygate.testfns import AnalyticFunction


def default_config() -> SuiteConfig:
    return SuiteConfig(
        suite="uniform-local-bound",
        grid=GridConfig(n_dims=1, extent=32.0, points_per_axis=512),
        corpus=CorpusConfig(kinds=[FunctionKind.BUMP], size=1, bump_radii=[1.0]),
        sweep=SweepAxes(
            alphas=[0.5, 1.0, 2.0],
            v_values=[0.0, 0.25, 0.5, 0.75, 1.0],
            w_values=[1.0, 2.0, 4.0, 8.0],
            w_include_infinity=True,
            ball_radii=[0.5, 1.0, 2.0],
        ),
    )


def _discrete_volume(spec: GridSpec, radius: float) -> float:
    r2 = sum(c * c for c in spec.coordinates())
    return spec.cell_volume * float(np.count_nonzero(r2 < radius * radius))


def _exponents(ctx: SuiteContext) -> list[float]:
    values = list(ctx.config.sweep.w_values)
    if ctx.config.sweep.w_include_infinity:
        values.append(math.inf)
    return values


def _cell(ctx: SuiteContext, f: AnalyticFunction, g: GridFunction, alpha: float) -> dict[str, Any]:
    spec = ctx.spec
    origin = (0.0,) * spec.n_dims
    lattice = lebesgue_multiplier_bound(g, alpha)
    split = split_majorant(g, alpha)
    rows: list[CaseRow] = []
    for radius in ctx.config.sweep.ball_radii:
        measure = _discrete_volume(spec, radius)
        continuum = unit_ball_volume(spec.n_dims) * radius**spec.n_dims
        for v in ctx.config.sweep.v_values:
            out = laplacian_power(g, alpha * v)
            peak = ball_local_norm(out, math.inf, origin, radius)
            for w in _exponents(ctx):
                value = ball_local_norm(out, w, origin, radius)
                right = lattice * max(1.0, measure)
                rows.append(
                    CaseRow(
                        function_id=f.label,
                        function_class=f.corpus_class.value,
                        params={"alpha": alpha, "ball_radius": radius, "v": v, "w": "inf" if math.isinf(w) else w},
                        left=finite_or_none(value),
                        right=finite_or_none(right),
                        ratio=finite_ratio(value, right),
                        extra={
                            "split_ratio": finite_ratio(value, split["value"] * max(1.0, continuum)),
                            "w_spread": finite_ratio(value, peak * max(1.0, measure)),
                        },
                    )
                )
    return {"rows": rows, "alpha": alpha, "lattice": lattice, "split": split}


def run(ctx: SuiteContext) -> SuiteOutcome:
    config = ctx.config
    tol = ctx.tolerances
    spec = ctx.spec
    corpus = ctx.corpus()
    clearance = support_clearance(corpus, spec)
    f = corpus[0]
    g = sample(f, spec)

    results = run_cells(lambda alpha: _cell(ctx, f, g, alpha), config.sweep.alphas, threads=ctx.threads)
    outcome = SuiteOutcome(grid=spec.to_dict(), corpus_classes=classes_of([f]))
    for result in results:
        outcome.rows.extend(result["rows"])

    lattice_ratio = max_or_none(r.ratio for r in outcome.rows)
    split_ratio = max_or_none(r.extra["split_ratio"] for r in outcome.rows)
    w_spread = max_or_none(r.extra["w_spread"] for r in outcome.rows)

    direct: list[float] = []
    origin = (0.0,) * spec.n_dims
    for row in outcome.rows:
        if row.params["v"] == 0.0 and row.params["w"] == 2.0:
            expected = ball_local_norm(g, 2.0, origin, float(row.params["ball_radius"]))
            direct.append(abs((row.left or 0.0) - expected) / expected)
    zero_power_gap = max_or_none(direct)

    reference_alpha = config.sweep.alphas[-1]
    reference_radius = config.sweep.ball_radii[0]

    def sides_of(h: AnalyticFunction) -> tuple[float, float]:
        sampled = sample(h, spec)
        value = ball_local_norm(laplacian_power(sampled, reference_alpha), 2.0, origin, reference_radius)
        return value, lebesgue_multiplier_bound(sampled, reference_alpha)

    homogeneity, gap, homogeneity_rows = homogeneity_criterion(sides_of, f, tol.homogeneity)
    outcome.check_rows.extend(homogeneity_rows)

    outcome.summary = {
        "max_value": max_or_none(r.left for r in outcome.rows),
        "max_lattice_ratio": lattice_ratio,
        "max_split_ratio": split_ratio,
        "max_w_spread": w_spread,
        "zero_power_gap": zero_power_gap,
        "majorants": {f"{r['alpha']:g}": {"lattice": r["lattice"], **r["split"]} for r in results},
        "homogeneity_gap": gap,
        "seam_clearance": clearance,
    }
    outcome.check(
        criterion(
            "lattice-majorant",
            "||.||_{L^w(B)} <= L^{-n} sum max(1,|xi|^alpha)|F| max(1,|B|) on the lattice",
            lattice_ratio,
            1.0 + tol.lattice,
        ),
        criterion(
            "split-majorant",
            "||.||_{L^w(B)} <= C_{n,alpha,f} max(1,|B|) with C from the split frequency integral",
            split_ratio,
            1.0 + tol.discretization,
        ),
        criterion(
            "w-spread",
            "||.||_{L^w(B)} <= max(1,|B|) ||.||_{L^inf(B)} for every w",
            w_spread,
            1.0 + tol.lattice,
        ),
        criterion("zero-power", "v = 0, w = 2 equals ||f||_{L^2(B)}", zero_power_gap, tol.exact),
        homogeneity,
    )
    outcome.stability = {"max_value": outcome.summary["max_value"]}
    return outcome
