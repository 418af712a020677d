"""Hardy inequality in Morrey spaces: ||  |x|^{-alpha} g ||_{M^p_q} <= C ||(-Delta)^{alpha/2} g||_{M^p_q}."""

from __future__ import annotations

import logging
from typing import Any

import numpy as np

from morreygate.exponents import validate_hardy
from morreygate.grid import GridFunction, pointwise_multiply, sample
from morreygate.models import (
    CaseRow,
    Comparison,
    CorpusConfig,
    ExponentTuple,
    FunctionKind,
    GridConfig,
    SuiteConfig,
    SweepAxes,
)
from morreygate.norms import lebesgue_norm, weak_norm
from morreygate.spectral import laplacian_power, zero_mode_mean
from morreygate.suites.common import (
    NormLog,
    SuiteContext,
    SuiteOutcome,
    check_row,
    classes_of,
    criterion,
    finite_or_none,
    finite_ratio,
    homogeneity_criterion,
    max_or_none,
    relative_gap,
    require_lambdas,
    sup_with_witness,
    support_clearance,
    witness_summary,
)
from morreygate.suites.olsen import cell_averaged_weight
from morreygate.sweep import run_cells, spread
from morreygate.testfns import ORIGIN_POLICY, AnalyticFunction, dilate_fn, power_weight

logger = logging.getLogger(__name__)

# alpha of the identity-limit check; the ratio is also taken at SMALL_ALPHA / 2 and extrapolated to alpha = 0.
SMALL_ALPHA = 0.01


def default_config() -> SuiteConfig:
    return SuiteConfig(
        suite="hardy",
        grid=GridConfig(n_dims=1, extent=1024.0, points_per_axis=131072),
        corpus=CorpusConfig(
            kinds=[FunctionKind.BUMP, FunctionKind.MOLLIFIED_NOISE],
            size=30,
            bump_radii=[4.0, 3.0, 3.5],
            noise_support=3.0,
            noise_width=1.0,
        ),
        sweep=SweepAxes(alphas=[0.2], lambdas=[0.25, 0.5, 1.0, 2.0, 4.0]),
        exponents=[{"p": 2.0, "q": 2.0}, {"p": 1.5, "q": 3.0}],
    )


def hardy_ratio(
    log: NormLog,
    weight: GridFunction,
    g: GridFunction,
    label: str,
    p: float,
    q: float,
    alpha: float,
) -> tuple[float, float]:
    left = log.morrey(pointwise_multiply(weight, g), p, q, f"W*{label}|a={alpha:g}")
    right = log.morrey(laplacian_power(g, alpha), p, q, f"{label}|z={alpha:g}")
    return left, right


def _weak_ratio(weight: GridFunction, g: GridFunction, tup: ExponentTuple, weight_weak: float) -> float | None:
    q, alpha = tup["q"], tup["alpha"]
    left = weak_norm(pointwise_multiply(weight, g), q)
    right = weight_weak * lebesgue_norm(laplacian_power(g, alpha), q)
    return finite_ratio(left, right)


def _cell(
    ctx: SuiteContext,
    tuples: list[ExponentTuple],
    weights: dict[float, tuple[GridFunction, dict[float, float]]],
    item: tuple[AnalyticFunction, float],
) -> dict[str, Any]:
    f, lam = item
    scaled = dilate_fn(f, lam)
    g = sample(scaled, ctx.spec)
    log = NormLog(ctx.family)
    rows = []
    for index, tup in enumerate(tuples):
        p, q, alpha = tup["p"], tup["q"], tup["alpha"]
        weight, weak_norms = weights[alpha]
        left, right = hardy_ratio(log, weight, g, scaled.label, p, q, alpha)
        extra: dict[str, float | None] = {}
        if p == q:
            extra["weak_ratio"] = _weak_ratio(weight, g, tup, weak_norms[tup["v"]])
        rows.append(
            CaseRow(
                function_id=f.label,
                function_class=f.corpus_class.value,
                params={"tuple": index, "alpha": alpha, "lambda": lam, "p": p, "q": q},
                left=finite_or_none(left),
                right=finite_or_none(right),
                ratio=finite_ratio(left, right),
                extra=extra,
            )
        )
    logger.debug("hardy cell %s lambda=%g: %d rows", f.label, lam, len(rows))
    return {"rows": rows, "norms": log.rows if lam == 1.0 else []}


def _mean_free(g: GridFunction) -> GridFunction:
    mean = zero_mode_mean(g)
    return g.with_values(g.values - (mean.real if np.isrealobj(g.values) else mean), note="zero mode removed")


def _small_alpha_cell(ctx: SuiteContext, exponents: list[ExponentTuple], f: AnalyticFunction) -> list[CaseRow]:
    g = _mean_free(sample(f, ctx.spec))
    rows = []
    for index, tup in enumerate(exponents):
        for alpha in (SMALL_ALPHA, SMALL_ALPHA / 2):
            weight = sample(power_weight(alpha), ctx.spec)
            left, right = hardy_ratio(NormLog(ctx.family), weight, g, f.label, tup["p"], tup["q"], alpha)
            rows.append(check_row("small-alpha", f, left, right, tuple=index, alpha=alpha, p=tup["p"], q=tup["q"]))
    return rows


def small_alpha_gaps(rows: list[CaseRow]) -> dict[str, float | None]:
    """|2 r(alpha/2) - r(alpha) - 1| per function and tuple, read back from the small-alpha check rows."""
    by_case: dict[tuple[str, Any], dict[float, float | None]] = {}
    for row in rows:
        if row.params.get("check") != "small-alpha":
            continue
        by_case.setdefault((row.function_id, row.params["tuple"]), {})[float(row.params["alpha"])] = row.ratio
    gaps: dict[str, float | None] = {}
    for (label, index), ratios in by_case.items():
        coarse, fine = ratios.get(SMALL_ALPHA), ratios.get(SMALL_ALPHA / 2)
        gaps[f"{label}|tuple={index}"] = None if coarse is None or fine is None else abs(2.0 * fine - coarse - 1.0)
    return gaps


def run(ctx: SuiteContext) -> SuiteOutcome:
    config = ctx.config
    tol = ctx.tolerances
    spec = ctx.spec
    n = spec.n_dims
    tuples = [validate_hardy(t["p"], t["q"], alpha, n) for t in config.exponents for alpha in config.sweep.alphas]
    small_tuples = [validate_hardy(t["p"], t["q"], SMALL_ALPHA, n) for t in config.exponents]
    for t in config.exponents:
        validate_hardy(t["p"], t["q"], SMALL_ALPHA / 2, n)

    corpus = ctx.corpus()
    lambdas = require_lambdas(config.sweep.lambdas)
    clearance = support_clearance(corpus + [dilate_fn(f, lam) for f in corpus for lam in lambdas], spec)

    weights: dict[float, tuple[GridFunction, dict[float, float]]] = {}
    for tup in tuples:
        alpha = tup["alpha"]
        if alpha not in weights:
            weights[alpha] = (sample(power_weight(alpha), spec), {})
        weight, weak = weights[alpha]
        weak.setdefault(tup["v"], weak_norm(weight, tup["v"]))

    items = [(f, lam) for f in corpus for lam in lambdas]
    results = run_cells(lambda item: _cell(ctx, tuples, weights, item), items, threads=ctx.threads)
    outcome = SuiteOutcome(
        exponent_tuples=tuples,
        grid=spec.to_dict(),
        origin_policy=ORIGIN_POLICY,
        corpus_classes=classes_of(corpus),
    )
    outcome.ball_families = {"lhs": ctx.family.describe(), "rhs": ctx.family.describe()}
    for result in results:
        outcome.rows.extend(result["rows"])
        outcome.norm_rows.extend(result["norms"])

    base_rows = [r for r in outcome.rows if r.params["lambda"] == 1.0]
    sup_ratio, witness = sup_with_witness(base_rows)
    weak_sup = max_or_none(r.extra.get("weak_ratio") for r in base_rows)

    spreads: dict[str, float | None] = {}
    for f in corpus:
        for index in range(len(tuples)):
            values = [r.ratio for r in outcome.rows if r.function_id == f.label and r.params["tuple"] == index]
            spreads[f"{f.label}|tuple={index}"] = spread([v for v in values if v is not None])
    worst_spread = max_or_none(spreads.values())

    for rows in run_cells(lambda f: _small_alpha_cell(ctx, small_tuples, f), corpus, threads=ctx.threads):
        outcome.check_rows.extend(rows)
    small_gaps = small_alpha_gaps(outcome.check_rows)
    small_gap = max_or_none(small_gaps.values()) if None not in small_gaps.values() else None

    reference = tuples[0]
    reference_weight = weights[reference["alpha"]][0]
    averaged = cell_averaged_weight(reference_weight, reference["alpha"], reference["p"])
    g = sample(corpus[0], spec)
    policy_lefts = {}
    for policy, weight in (("half-cell", reference_weight), ("cell-average", averaged)):
        left = NormLog(ctx.family).morrey(pointwise_multiply(weight, g), reference["p"], reference["q"], policy)
        policy_lefts[policy] = left
        outcome.check_rows.append(
            check_row("origin-policy", corpus[0], left, None, policy=policy, p=reference["p"], q=reference["q"])
        )
    policy_shift = relative_gap(policy_lefts["half-cell"], policy_lefts["cell-average"])
    weak_v = reference["v"]
    weak_shift = relative_gap(
        weights[reference["alpha"]][1][weak_v],
        weak_norm(cell_averaged_weight(reference_weight, reference["alpha"], weak_v), weak_v),
    )

    def sides_of(h: AnalyticFunction) -> tuple[float, float]:
        return hardy_ratio(
            NormLog(ctx.family),
            reference_weight,
            sample(h, spec),
            h.label,
            reference["p"],
            reference["q"],
            reference["alpha"],
        )

    homogeneity, gap, homogeneity_rows = homogeneity_criterion(sides_of, corpus[0], tol.homogeneity)
    outcome.check_rows.extend(homogeneity_rows)

    outcome.summary = {
        "sup_ratio": sup_ratio,
        "argmax": witness_summary(witness),
        "weak_route_sup": weak_sup,
        "dilation_spreads": spreads,
        "max_dilation_spread": worst_spread,
        "small_alpha": SMALL_ALPHA,
        "small_alpha_gaps": small_gaps,
        "small_alpha_gap": small_gap,
        "origin_policy_shift": {"morrey": policy_shift, "weak": weak_shift},
        "homogeneity_gap": gap,
        "seam_clearance": clearance,
    }
    outcome.check(
        criterion("sup-finite", "sup ratio over the corpus stays finite", sup_ratio, tol.ratio_ceiling),
        criterion(
            "dilation-spread",
            f"(max - min)/max of the ratio across lambda in {lambdas}, per function",
            worst_spread,
            tol.discretization,
        ),
        criterion(
            "small-alpha",
            f"|2 r({SMALL_ALPHA / 2:g}) - r({SMALL_ALPHA:g}) - 1| for the zero-mode-free corpus, r the Hardy ratio",
            small_gap,
            tol.identity_limit,
            Comparison.ABS_LE,
        ),
        criterion(
            "origin-policy",
            "relative change of ||W g|| when the origin cell is averaged on a 4x-refined grid",
            policy_shift,
            tol.discretization,
        ),
        homogeneity,
    )
    if weak_sup is not None:
        outcome.check(
            criterion(
                "weak-route",
                "||W g||_{wL^q} / (||W||_{wL^v} ||(-Delta)^{alpha/2} g||_{L^q}) stays finite for p = q",
                weak_sup,
                tol.ratio_ceiling,
            )
        )
    outcome.stability = {"sup_ratio": sup_ratio}
    outcome.spreads = {"max_dilation_spread": worst_spread}
    return outcome
