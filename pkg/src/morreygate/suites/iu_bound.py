"""Imaginary powers on Morrey spaces: ||(-Delta)^{iu/2} f|| against (1+|u|)^{n/2} ||f||."""

from __future__ import annotations

from typing import Any

from morreygate.exponents import validate_iu_bound
from morreygate.grid import sample
from morreygate.models import CaseRow, Comparison, CorpusConfig, GridConfig, SuiteConfig, SweepAxes
from morreygate.norms import lebesgue_norm
from morreygate.spectral import laplacian_power
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


def default_config() -> SuiteConfig:
    return SuiteConfig(
        suite="iu-bound",
        grid=GridConfig(n_dims=1, extent=256.0, points_per_axis=4096),
        corpus=CorpusConfig(size=20),
        sweep=SweepAxes(u_values=[float(u) for u in range(-40, 41, 4)], trend_threshold=10.0),
        exponents=[{"p": 1.5, "q": 3.0}, {"p": 2.0, "q": 2.0}],
    )


def _u_values(ctx: SuiteContext) -> list[float]:
    return sorted(set(ctx.config.sweep.u_values) | {0.0})


def _cell(ctx: SuiteContext, tuples: list[dict[str, float]], f: AnalyticFunction) -> dict[str, Any]:
    log = NormLog(ctx.family)
    n = ctx.spec.n_dims
    g = sample(f, ctx.spec)
    base_l2 = lebesgue_norm(g, 2.0)
    rows: list[CaseRow] = []
    for u in _u_values(ctx):
        out = laplacian_power(g, 1j * u)
        isometry = abs(lebesgue_norm(out, 2.0) / base_l2 - 1.0)
        for index, tup in enumerate(tuples):
            p, q = tup["p"], tup["q"]
            left = log.morrey(out, p, q, f"{f.label}|iu={u:g}")
            base = log.morrey(g, p, q, f.label)
            right = (1.0 + abs(u)) ** (n / 2.0) * base
            sharp = (1.0 + abs(u)) ** abs(n / p - n / 2.0) * base
            rows.append(
                CaseRow(
                    function_id=f.label,
                    function_class=f.corpus_class.value,
                    params={"u": u, "tuple": index, "p": p, "q": q},
                    left=finite_or_none(left),
                    right=finite_or_none(right),
                    ratio=finite_ratio(left, right),
                    extra={
                        "lp_ratio": finite_ratio(left, sharp),
                        "raw_ratio": finite_ratio(left, base),
                        "isometry_gap": finite_or_none(isometry),
                    },
                )
            )
    return {"rows": rows, "norms": log.rows}


def _trend(rows: list[CaseRow], threshold: float) -> tuple[dict[str, float], float | None]:
    """sup_f R per |u| and the largest relative increase between consecutive |u| beyond the threshold."""
    by_u: dict[float, float] = {}
    for row in rows:
        if row.ratio is None:
            continue
        key = abs(float(row.params["u"]))
        by_u[key] = max(by_u.get(key, 0.0), row.ratio)
    tail = [by_u[u] for u in sorted(by_u) if u >= threshold]
    rises = [(b - a) / a for a, b in zip(tail, tail[1:]) if a > 0]
    return {f"{u:g}": by_u[u] for u in sorted(by_u)}, (max(rises) if rises else 0.0)


def run(ctx: SuiteContext) -> SuiteOutcome:
    config = ctx.config
    tol = ctx.tolerances
    n = ctx.spec.n_dims
    validated = [validate_iu_bound(t["p"], t["q"], n) for t in config.exponents]
    tuples = [dict(t.values) for t in validated]
    corpus = ctx.corpus()
    clearance = support_clearance(corpus, ctx.spec)

    results = run_cells(lambda f: _cell(ctx, tuples, f), corpus, threads=ctx.threads)
    outcome = SuiteOutcome(exponent_tuples=validated, grid=ctx.spec.to_dict(), corpus_classes=classes_of(corpus))
    outcome.ball_families = {"lhs": ctx.family.describe(), "rhs": ctx.family.describe()}
    for result in results:
        outcome.rows.extend(result["rows"])
        outcome.norm_rows.extend(result["norms"])

    sup_ratio, witness = sup_with_witness(outcome.rows)
    identity = max_or_none(abs(r.ratio - 1.0) for r in outcome.rows if r.params["u"] == 0.0 and r.ratio is not None)
    isometry = max_or_none(r.extra.get("isometry_gap") for r in outcome.rows)
    per_u, rise = _trend(outcome.rows, config.sweep.trend_threshold)
    sharp_sup = max_or_none(r.extra.get("lp_ratio") for r in outcome.rows)

    def sides_of(f: AnalyticFunction) -> tuple[float, float]:
        g = sample(f, ctx.spec)
        u = max(_u_values(ctx), key=abs)
        tup = tuples[0]
        log = NormLog(ctx.family)
        top = log.morrey(laplacian_power(g, 1j * u), tup["p"], tup["q"], "lhs")
        return top, (1.0 + abs(u)) ** (n / 2.0) * log.morrey(g, tup["p"], tup["q"], "rhs")

    homogeneity, gap, homogeneity_rows = homogeneity_criterion(sides_of, corpus[0], tol.homogeneity)
    outcome.check_rows.extend(homogeneity_rows)

    outcome.summary = {
        "sup_ratio": sup_ratio,
        "argmax": witness_summary(witness),
        "sup_lp_ratio": sharp_sup,
        "sup_ratio_by_abs_u": per_u,
        "trend_max_rise": rise,
        "identity_gap": identity,
        "l2_isometry_gap": isometry,
        "homogeneity_gap": gap,
        "seam_clearance": clearance,
    }
    outcome.check(
        criterion("identity", "u = 0 gives ratio 1", identity, tol.exact, Comparison.ABS_LE),
        criterion(
            "l2-isometry",
            "||(-Delta)^{iu/2} f||_2 / ||f||_2 - 1 over every function and u",
            isometry,
            tol.isometry,
        ),
        criterion("sup-finite", "sup ratio over the sweep stays finite", sup_ratio, tol.ratio_ceiling),
        criterion(
            "trend",
            f"sup_f R(f, u) non-increasing in |u| >= {config.sweep.trend_threshold:g} up to relative slack",
            rise,
            tol.trend,
        ),
        homogeneity,
    )
    outcome.stability = {"sup_ratio": sup_ratio}
    return outcome
