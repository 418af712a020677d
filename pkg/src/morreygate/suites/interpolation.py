"""Interpolation between M^{p0}_{q0} and M^{p1}_{q1} through (-Delta)^{alpha theta/2}."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from morreygate.exponents import validate_interpolation
from morreygate.grid import GridFunction, sample
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
    require_lambdas,
    sup_with_witness,
    support_clearance,
    witness_summary,
)
from morreygate.sweep import run_cells, spread
from morreygate.testfns import AnalyticFunction, dilate_fn

# theta used for the dilation sweep
DILATION_THETA = 0.5


def default_config() -> SuiteConfig:
    return SuiteConfig(
        suite="interpolation",
        grid=GridConfig(n_dims=1, extent=512.0, points_per_axis=131072),
        corpus=CorpusConfig(size=6, bump_radii=[2.0, 1.5], sigmas=[1.0, 0.75]),
        sweep=SweepAxes(
            thetas=[0.0, 0.25, 0.5, 0.75, 1.0],
            alphas=[0.5, 1.0, 2.0],
            lambdas=[0.25, 0.5, 1.0, 2.0, 4.0],
        ),
        exponents=[
            {"p0": 2.0, "q0": 2.0, "p1": 2.0, "q1": 2.0},
            {"p0": 2.0, "q0": 4.0, "p1": 3.0, "q1": 6.0},
            {"p0": 1.5, "q0": 3.0, "p1": 2.0, "q1": 4.0},
        ],
    )


def _is_lebesgue(tup: dict[str, float]) -> bool:
    return all(tup[k] == 2.0 for k in ("p0", "q0", "p1", "q1"))


@dataclass(frozen=True)
class _Case:
    index: int
    tup: ExponentTuple

    @property
    def alpha(self) -> float:
        return self.tup["alpha"]

    @property
    def theta(self) -> float:
        return self.tup["theta"]


class _Powers:
    """(-Delta)^{z/2} g, computed once per z."""

    def __init__(self, g: GridFunction) -> None:
        self.g = g
        self._cache: dict[float, GridFunction] = {}

    def __call__(self, z: float) -> GridFunction:
        if z not in self._cache:
            self._cache[z] = laplacian_power(self.g, z)
        return self._cache[z]


def _ratio(log: NormLog, powers: _Powers, label: str, case: _Case) -> tuple[float, float]:
    t = case.tup
    z = case.alpha * case.theta
    left = log.morrey(powers(z), t["p"], t["q"], f"{label}|z={z:g}")
    base = log.morrey(powers.g, t["p0"], t["q0"], label)
    top = log.morrey(powers(case.alpha), t["p1"], t["q1"], f"{label}|z={case.alpha:g}")
    right = base ** (1.0 - case.theta) * top**case.theta
    return left, right


def _cell(ctx: SuiteContext, cases: list[_Case], f: AnalyticFunction) -> dict[str, Any]:
    log = NormLog(ctx.family)
    powers = _Powers(sample(f, ctx.spec))
    rows = []
    for case in cases:
        left, right = _ratio(log, powers, f.label, case)
        t = case.tup
        rows.append(
            CaseRow(
                function_id=f.label,
                function_class=f.corpus_class.value,
                params={"tuple": case.index, "alpha": case.alpha, "theta": case.theta, "p": t["p"], "q": t["q"]},
                left=finite_or_none(left),
                right=finite_or_none(right),
                ratio=finite_ratio(left, right),
            )
        )
    return {"rows": rows, "norms": log.rows}


def _dilation_cell(ctx: SuiteContext, cases: list[_Case], item: tuple[AnalyticFunction, float]) -> list[CaseRow]:
    f, lam = item
    scaled = dilate_fn(f, lam)
    log = NormLog(ctx.family)
    powers = _Powers(sample(scaled, ctx.spec))
    rows = []
    for case in cases:
        left, right = _ratio(log, powers, scaled.label, case)
        params = {"tuple": case.index, "alpha": case.alpha, "theta": case.theta, "lambda": lam}
        rows.append(check_row("dilation", f, left, right, **params))
    return rows


def run(ctx: SuiteContext) -> SuiteOutcome:
    config = ctx.config
    tol = ctx.tolerances
    n = ctx.spec.n_dims
    sweep = config.sweep

    cases: list[_Case] = []
    for index, raw in enumerate(config.exponents):
        for alpha in sweep.alphas:
            for theta in sweep.thetas:
                tup = validate_interpolation(raw["p0"], raw["q0"], raw["p1"], raw["q1"], theta, alpha=alpha, n=n)
                cases.append(_Case(index=index, tup=tup))

    corpus = ctx.corpus()
    lambdas = require_lambdas(sweep.lambdas)
    bumps = [f for f in corpus if f.kind == FunctionKind.BUMP]
    dilated = [dilate_fn(f, lam) for f in bumps for lam in lambdas]
    clearance = support_clearance(corpus + dilated, ctx.spec)

    outcome = SuiteOutcome(
        exponent_tuples=[c.tup for c in cases],
        grid=ctx.spec.to_dict(),
        corpus_classes=classes_of(corpus),
    )
    outcome.ball_families = {"lhs": ctx.family.describe(), "rhs": ctx.family.describe()}
    for result in run_cells(lambda f: _cell(ctx, cases, f), corpus, threads=ctx.threads):
        outcome.rows.extend(result["rows"])
        outcome.norm_rows.extend(result["norms"])

    lebesgue = {i for i, raw in enumerate(config.exponents) if _is_lebesgue(raw)}
    interior = [c for c in cases if c.index not in lebesgue and 0.0 < c.theta < 1.0]
    dilation_cases = [c for c in interior if c.theta == DILATION_THETA] or interior[:1]
    spreads: dict[str, float | None] = {}
    if dilation_cases and bumps:
        items = [(f, lam) for f in bumps for lam in lambdas]
        for rows in run_cells(lambda item: _dilation_cell(ctx, dilation_cases, item), items, threads=ctx.threads):
            outcome.check_rows.extend(rows)
        for f in bumps:
            for case in dilation_cases:
                values = [
                    r.ratio
                    for r in outcome.check_rows
                    if r.function_id == f.label and (r.params["tuple"], r.params["alpha"]) == (case.index, case.alpha)
                ]
                spreads[f"{f.label}|tuple={case.index}|alpha={case.alpha:g}"] = spread(values)

    endpoint = max_or_none(
        abs(r.ratio - 1.0) for r in outcome.rows if r.params["theta"] in (0.0, 1.0) and r.ratio is not None
    )
    l2_excess = max_or_none(
        r.ratio - 1.0 for r in outcome.rows if r.params["tuple"] in lebesgue and r.ratio is not None
    )
    sup_ratio, witness = sup_with_witness(outcome.rows)
    worst_spread = max_or_none(spreads.values())

    reference = interior[0] if interior else cases[0]

    def sides_of(f: AnalyticFunction) -> tuple[float, float]:
        return _ratio(NormLog(ctx.family), _Powers(sample(f, ctx.spec)), f.label, reference)

    homogeneity, gap, homogeneity_rows = homogeneity_criterion(sides_of, corpus[0], tol.homogeneity)
    outcome.check_rows.extend(homogeneity_rows)

    outcome.summary = {
        "sup_ratio": sup_ratio,
        "argmax": witness_summary(witness),
        "endpoint_gap": endpoint,
        "lebesgue_excess": l2_excess,
        "dilation_spreads": spreads,
        "max_dilation_spread": worst_spread,
        "lambdas": lambdas,
        "homogeneity_gap": gap,
        "seam_clearance": clearance,
    }
    outcome.check(criterion("endpoints", "theta in {0, 1} gives ratio 1", endpoint, tol.exact, Comparison.ABS_LE))
    if lebesgue:
        outcome.check(
            criterion(
                "lebesgue-cauchy-schwarz",
                "all-L2 tuples: ratio - 1 never positive beyond the isometry tolerance",
                l2_excess,
                tol.isometry,
            )
        )
    if spreads:
        outcome.check(
            criterion(
                "dilation-spread",
                f"(max - min)/max of the ratio across lambda in {lambdas} for non-L2 tuples",
                worst_spread,
                tol.discretization,
            )
        )
    outcome.check(
        criterion("sup-finite", "sup ratio over the sweep stays finite", sup_ratio, tol.ratio_ceiling),
        homogeneity,
    )
    outcome.stability = {"sup_ratio": sup_ratio}
    outcome.spreads = {"max_dilation_spread": worst_spread}
    return outcome
