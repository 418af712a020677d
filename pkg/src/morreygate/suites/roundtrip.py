"""(-Delta)^{-alpha/2} (-Delta)^{alpha/2} g = g, and the norm chain for f = (-Delta)^{alpha/2} g."""

from __future__ import annotations

import logging
from typing import Any

import numpy as np

from morreygate.errors import RieszRangeError
from morreygate.grid import GridFunction, sample
from morreygate.models import CaseRow, CorpusConfig, FunctionKind, GridConfig, SuiteConfig, SweepAxes
from morreygate.norms import lebesgue_norm
from morreygate.spectral import compose_powers, laplacian_power, zero_mode_mean
from morreygate.suites.common import (
    NormLog,
    SuiteContext,
    SuiteOutcome,
    classes_of,
    criterion,
    finite_or_none,
    finite_ratio,
    homogeneity_criterion,
    max_or_none,
    sup_with_witness,
    support_clearance,
    witness_summary,
)
from morreygate.sweep import run_cells
from morreygate.testfns import AnalyticFunction

logger = logging.getLogger(__name__)

# Discrete Holder between lattice sums is exact up to rounding.
INTERPOLATION_SLACK = 1e-12


def default_config() -> SuiteConfig:
    return SuiteConfig(
        suite="roundtrip",
        grid=GridConfig(n_dims=1, extent=32.0, points_per_axis=512),
        corpus=CorpusConfig(kinds=[FunctionKind.BUMP], size=3, bump_radii=[1.0, 1.5, 2.0]),
        sweep=SweepAxes(alphas=[0.25, 0.5, 0.75]),
        exponents=[{"p": 1.5, "q": 3.0}, {"p": 2.0, "q": 4.0}],
    )


def roundtrip_errors(g: GridFunction, alpha: float) -> dict[str, float]:
    """Relative max errors of the fused and two-step round trips, and the predicted two-step offset."""
    peak = float(np.max(g.abs()))
    fused = compose_powers(g, alpha, -alpha, fused=True)
    two_step = compose_powers(g, alpha, -alpha)
    predicted = abs(zero_mode_mean(g))
    return {
        "fused_error": float(np.max(np.abs(fused.values - g.values))) / peak,
        "two_step_error": float(np.max(np.abs(two_step.values - g.values))),
        "predicted_offset": predicted,
    }


def _chain(log: NormLog, f: GridFunction, label: str, p: float, q: float) -> dict[str, float]:
    morrey = log.morrey(f, p, q, label)
    lq = lebesgue_norm(f, q)
    bound = lebesgue_norm(f, float("inf")) ** (1.0 - 1.0 / q) * lebesgue_norm(f, 1.0) ** (1.0 / q)
    return {"morrey": morrey, "lq": lq, "interpolated": bound}


def _cell(ctx: SuiteContext, item: tuple[AnalyticFunction, float]) -> dict[str, Any]:
    g_fn, alpha = item
    g = sample(g_fn, ctx.spec)
    errors = roundtrip_errors(g, alpha)
    f = laplacian_power(g, alpha)
    label = f"{g_fn.label}|z={alpha:g}"
    log = NormLog(ctx.family)
    rows = []
    for index, tup in enumerate(ctx.config.exponents):
        p, q = tup["p"], tup["q"]
        chain = _chain(log, f, label, p, q)
        rows.append(
            CaseRow(
                function_id=g_fn.label,
                function_class=g_fn.corpus_class.value,
                params={"tuple": index, "alpha": alpha, "p": p, "q": q},
                left=finite_or_none(chain["morrey"]),
                right=finite_or_none(chain["lq"]),
                ratio=finite_ratio(chain["morrey"], chain["lq"]),
                extra={
                    "interpolation_ratio": finite_ratio(chain["lq"], chain["interpolated"]),
                    "fused_error": finite_or_none(errors["fused_error"]),
                    "two_step_error": finite_or_none(errors["two_step_error"]),
                    "predicted_offset": finite_or_none(errors["predicted_offset"]),
                },
            )
        )
    logger.debug("roundtrip cell %s alpha=%g: fused error %.3g", g_fn.label, alpha, errors["fused_error"])
    return {"rows": rows, "norms": log.rows, "errors": errors}


def run(ctx: SuiteContext) -> SuiteOutcome:
    config = ctx.config
    tol = ctx.tolerances
    spec = ctx.spec
    n = spec.n_dims
    for alpha in config.sweep.alphas:
        if not 0.0 < alpha < n:
            raise RieszRangeError(f"round trip needs 0 < alpha < n, got alpha={alpha:g} with n={n}")

    corpus = ctx.corpus()
    clearance = support_clearance(corpus, spec)
    items = [(g, alpha) for g in corpus for alpha in config.sweep.alphas]
    results = run_cells(lambda item: _cell(ctx, item), items, threads=ctx.threads)

    outcome = SuiteOutcome(grid=spec.to_dict(), corpus_classes=classes_of(corpus))
    outcome.ball_families = {"lhs": ctx.family.describe(), "rhs": ctx.family.describe()}
    offset_gaps: list[float | None] = []
    for result in results:
        outcome.rows.extend(result["rows"])
        outcome.norm_rows.extend(result["norms"])
        errors = result["errors"]
        miss = abs(errors["two_step_error"] - errors["predicted_offset"])
        offset_gaps.append(finite_ratio(miss, errors["predicted_offset"]))

    fused = max_or_none(r["errors"]["fused_error"] for r in results)
    offset_gap = max_or_none(offset_gaps)
    sup_ratio, witness = sup_with_witness(outcome.rows)
    interpolation = max_or_none(r.extra["interpolation_ratio"] for r in outcome.rows)

    reference = config.exponents[0]
    reference_alpha = config.sweep.alphas[0]

    def sides_of(h: AnalyticFunction) -> tuple[float, float]:
        f = laplacian_power(sample(h, spec), reference_alpha)
        chain = _chain(NormLog(ctx.family), f, h.label, reference["p"], reference["q"])
        return chain["morrey"], chain["lq"]

    homogeneity, gap, homogeneity_rows = homogeneity_criterion(sides_of, corpus[0], tol.homogeneity)
    outcome.check_rows.extend(homogeneity_rows)

    outcome.summary = {
        "max_fused_error": fused,
        "max_offset_gap": offset_gap,
        "sup_morrey_over_lq": sup_ratio,
        "argmax": witness_summary(witness),
        "max_interpolation_ratio": interpolation,
        "homogeneity_gap": gap,
        "seam_clearance": clearance,
    }
    outcome.check(
        criterion("fused-roundtrip", "relative max error of the single-multiplier path", fused, tol.isometry),
        criterion(
            "two-step-offset",
            "two-step error against the predicted zero-mode offset |F_0|/L^n, relative",
            offset_gap,
            tol.zero_mode,
        ),
        criterion(
            "morrey-below-lebesgue",
            "||f||_{M^p_q} / ||f||_{L^q}",
            sup_ratio,
            1.0 + tol.discretization,
        ),
        criterion(
            "lebesgue-interpolation",
            "||f||_{L^q} / (||f||_inf^{1-1/q} ||f||_1^{1/q})",
            interpolation,
            1.0 + INTERPOLATION_SLACK,
        ),
        homogeneity,
    )
    outcome.stability = {"sup_morrey_over_lq": sup_ratio}
    return outcome
