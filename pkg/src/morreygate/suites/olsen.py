"""Olsen-type weighted bound ||W g||_{M^p_q} <= C ||W||_{M^u_v} ||(-Delta)^{alpha/2} g||_{M^p_q}, W = |x|^{-alpha}.

g runs over centered and translated bumps, so (-Delta)^{-alpha/2} f = g holds
without a Riesz step and its zero-mode caveat.
"""

from __future__ import annotations

import logging
from typing import Any

import numpy as np

from morreygate.exponents import validate_olsen
from morreygate.grid import GridFunction, GridSpec, pointwise_multiply, sample
from morreygate.models import (
    CaseRow,
    CorpusConfig,
    ExponentTuple,
    FunctionKind,
    GridConfig,
    SuiteConfig,
    SweepAxes,
)
from morreygate.norms import BallFamily, morrey_norm, radial_profile_at_origin
from morreygate.spectral import laplacian_power
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
from morreygate.sweep import run_cells, spread
from morreygate.testfns import ORIGIN_POLICY, AnalyticFunction, dilate_fn, origin_cell_average, power_weight

logger = logging.getLogger(__name__)

# The weight profile is read from this many cells out, where the origin cell no longer moves it by a percent.
PROFILE_MIN_CELLS = 2048
WEIGHT_PROFILE_TOLERANCE = 0.03


def default_config() -> SuiteConfig:
    return SuiteConfig(
        suite="olsen",
        grid=GridConfig(n_dims=1, extent=512.0, points_per_axis=131072),
        corpus=CorpusConfig(
            kinds=[FunctionKind.BUMP],
            size=6,
            bump_radii=[2.0, 3.0, 2.5],
            shifts=[0.0, 0.0, 0.0, 2.5, 2.5, 2.5],
        ),
        sweep=SweepAxes(lambdas=[0.5, 1.0, 2.0]),
        exponents=[{"p": 1.5, "q": 2.5, "alpha": 0.25}, {"p": 2.0, "q": 3.0, "alpha": 0.25}],
    )


def cell_averaged_weight(weight: GridFunction, alpha: float, power: float) -> GridFunction:
    """The sampled weight with its origin value replaced by the L^power mean over a 4x-refined origin cell."""
    spec = weight.spec
    mean = origin_cell_average(alpha * power, spec.n_dims, spec.spacing) ** (1.0 / power)
    values = np.array(weight.values)
    values[spec.origin_index()] = mean
    return weight.with_values(values, note="origin cell averaged")


def weight_profile(weight: GridFunction, family: BallFamily, tup: ExponentTuple) -> list[tuple[float, float]]:
    """(radius, objective) of W at the origin for radii in [PROFILE_MIN_CELLS h, L/4]; flat when alpha = n/v."""
    spec = weight.spec
    profile = radial_profile_at_origin(weight, tup["u"], tup["v"], family)
    low, high = PROFILE_MIN_CELLS * spec.spacing, spec.extent / 4.0
    return [(r, float(value)) for r, value in zip(family.radii, profile) if low <= r <= high]


def weight_norms(spec: GridSpec, family: BallFamily, tup: ExponentTuple) -> dict[str, Any]:
    """||W||_{M^u_v} with the half-cell origin policy and with the refined origin-cell average."""
    alpha, u, v = tup["alpha"], tup["u"], tup["v"]
    weight = sample(power_weight(alpha), spec)
    policy = morrey_norm(weight, u, v, family).value
    averaged = morrey_norm(cell_averaged_weight(weight, alpha, u), u, v, family).value
    profile = weight_profile(weight, family, tup)
    return {
        "policy": policy,
        "cell_average": averaged,
        "policy_shift": relative_gap(policy, averaged),
        "profile": profile,
        "profile_spread": spread([value for _, value in profile]),
    }


def _ratio(
    log: NormLog,
    weight: GridFunction,
    weight_norm: float,
    g: GridFunction,
    label: str,
    tup: ExponentTuple,
) -> tuple[float, float]:
    p, q, alpha = tup["p"], tup["q"], tup["alpha"]
    left = log.morrey(pointwise_multiply(weight, g), p, q, f"W*{label}|a={alpha:g}")
    right = weight_norm * log.morrey(laplacian_power(g, alpha), p, q, f"{label}|z={alpha:g}")
    return left, right


def _cell(
    ctx: SuiteContext,
    tuples: list[ExponentTuple],
    weights: dict[int, tuple[GridFunction, float]],
    item: tuple[AnalyticFunction, float],
) -> dict[str, Any]:
    f, lam = item
    scaled = dilate_fn(f, lam)
    g = sample(scaled, ctx.spec)
    log = NormLog(ctx.family)
    rows = []
    for index, tup in enumerate(tuples):
        weight, weight_norm = weights[index]
        left, right = _ratio(log, weight, weight_norm, g, scaled.label, tup)
        rows.append(
            CaseRow(
                function_id=f.label,
                function_class=f.corpus_class.value,
                params={"tuple": index, "lambda": lam, "centered": int(not any(f.center))},
                left=finite_or_none(left),
                right=finite_or_none(right),
                ratio=finite_ratio(left, right),
            )
        )
    logger.debug("olsen cell %s lambda=%g: %d rows", f.label, lam, len(rows))
    return {"rows": rows, "norms": log.rows if lam == 1.0 else []}


def run(ctx: SuiteContext) -> SuiteOutcome:
    config = ctx.config
    tol = ctx.tolerances
    spec = ctx.spec
    n = spec.n_dims
    tuples = [validate_olsen(t["p"], t["q"], t["alpha"], n) for t in config.exponents]

    corpus = ctx.corpus()
    centered = [f for f in corpus if not any(f.center)]
    translated = [f for f in corpus if any(f.center)]
    lambdas = require_lambdas(config.sweep.lambdas)
    clearance = support_clearance(corpus + [dilate_fn(f, lam) for f in centered for lam in lambdas], spec)

    outcome = SuiteOutcome(
        exponent_tuples=tuples,
        grid=spec.to_dict(),
        origin_policy=ORIGIN_POLICY,
        corpus_classes=classes_of(corpus),
    )
    weights: dict[int, tuple[GridFunction, float]] = {}
    audits: dict[str, dict[str, Any]] = {}
    for index, tup in enumerate(tuples):
        audit = weight_norms(spec, ctx.family, tup)
        profile = audit.pop("profile")
        audits[str(index)] = audit
        w = power_weight(tup["alpha"])
        weights[index] = (sample(w, spec), audit["policy"])
        for policy in ("policy", "cell_average"):
            outcome.check_rows.append(
                check_row("origin-policy", w, audit[policy], None, tuple=index, policy=policy.replace("_", "-"))
            )
        for radius, value in profile:
            outcome.check_rows.append(check_row("weight-profile", w, value, None, tuple=index, radius=radius))

    items = [(f, lam) for f in centered for lam in lambdas] + [(f, 1.0) for f in translated]
    results = run_cells(lambda item: _cell(ctx, tuples, weights, item), items, threads=ctx.threads)
    outcome.ball_families = {"lhs": ctx.family.describe(), "rhs": ctx.family.describe()}
    for result in results:
        outcome.rows.extend(result["rows"])
        outcome.norm_rows.extend(result["norms"])

    base_rows = [r for r in outcome.rows if r.params["lambda"] == 1.0]
    sup_ratio, witness = sup_with_witness(base_rows)
    centered_sup = max_or_none(r.ratio for r in base_rows if r.params["centered"])
    translated_sup = max_or_none(r.ratio for r in base_rows if not r.params["centered"])
    excess = None
    if centered_sup and translated_sup is not None:
        excess = translated_sup / centered_sup - 1.0

    spreads: dict[str, float | None] = {}
    for f in centered:
        for index in range(len(tuples)):
            values = [r.ratio for r in outcome.rows if r.function_id == f.label and r.params["tuple"] == index]
            spreads[f"{f.label}|tuple={index}"] = spread([v for v in values if v is not None])
    worst_spread = max_or_none(spreads.values())
    shifts = [a["policy_shift"] for a in audits.values()]
    policy_shift = None if None in shifts else max(shifts)
    profiles = [a["profile_spread"] for a in audits.values()]
    profile_spread = None if None in profiles else max(profiles)

    reference = tuples[0]
    reference_weight, reference_norm = weights[0]

    def sides_of(h: AnalyticFunction) -> tuple[float, float]:
        return _ratio(NormLog(ctx.family), reference_weight, reference_norm, sample(h, spec), h.label, reference)

    homogeneity, gap, homogeneity_rows = homogeneity_criterion(sides_of, corpus[0], tol.homogeneity)
    outcome.check_rows.extend(homogeneity_rows)

    outcome.summary = {
        "sup_ratio": sup_ratio,
        "argmax": witness_summary(witness),
        "centered_sup": centered_sup,
        "translated_sup": translated_sup,
        "translated_excess": excess,
        "dilation_spreads": spreads,
        "max_dilation_spread": worst_spread,
        "weight_norms": audits,
        "weight_profile_window": [PROFILE_MIN_CELLS * spec.spacing, spec.extent / 4.0],
        "homogeneity_gap": gap,
        "seam_clearance": clearance,
    }
    outcome.check(criterion("sup-finite", "sup ratio over the corpus stays finite", sup_ratio, tol.ratio_ceiling))
    if excess is not None:
        outcome.check(
            criterion(
                "translation",
                "translated sup / centered sup - 1 stays inside the discretization band",
                excess,
                tol.discretization,
            )
        )
    if spreads:
        outcome.check(
            criterion(
                "dilation-spread",
                f"(max - min)/max of the ratio across lambda in {lambdas} for centered bumps",
                worst_spread,
                tol.discretization,
            )
        )
    outcome.check(
        criterion(
            "origin-policy",
            "relative change of ||W||_{M^u_v} when the origin cell is averaged on a 4x-refined grid",
            policy_shift,
            tol.discretization,
        ),
        criterion(
            "weight-profile",
            "(max - min)/max of the origin objective of W across the profile radii",
            profile_spread,
            WEIGHT_PROFILE_TOLERANCE,
        ),
        homogeneity,
    )
    outcome.stability = {"sup_ratio": sup_ratio}
    outcome.spreads = {"max_dilation_spread": worst_spread}
    return outcome
