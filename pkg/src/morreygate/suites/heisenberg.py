"""Heisenberg-type bounds ||g||_{M^{p0}_{q0}} <= C || |x|^beta g ||^{a} ||(-Delta)^{s/2} g||^{b}.

a = s/(beta+s) and b = beta/(beta+s). The small suite needs 0 < s = gamma < n/q and
splits the bound into a Holder step (exact on the lattice) and a Hardy step.
The general suite lets s = delta exceed n/q1; below n/q1 it runs the small
path unchanged, above it records the interpolation route the bound goes through.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

from morreygate.constants import SuiteId
from morreygate.errors import HypothesisError
from morreygate.exponents import interpolation_route, validate_heisenberg, validate_heisenberg_small
from morreygate.grid import GridFunction, GridSpec, pointwise_multiply, sample
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
from morreygate.norms import lebesgue_norm
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
from morreygate.testfns import ORIGIN_POLICY, AnalyticFunction, build_corpus, dilate_fn, moment_weight, power_weight

logger = logging.getLogger(__name__)

CLASSICAL_CORPUS_SIZE = 50
# gamma = BOUNDARY_BACKOFF * n/q for the nearest admissible run
BOUNDARY_BACKOFF = 0.95


def default_small_config() -> SuiteConfig:
    return SuiteConfig(
        suite="heisenberg-small",
        grid=GridConfig(n_dims=1, extent=64.0, points_per_axis=1024),
        corpus=CorpusConfig(size=6, noise_support=3.0, noise_width=1.5),
        sweep=SweepAxes(lambdas=[0.5, 1.0, 2.0], dilation_members=2),
        exponents=[
            {"p": 2.0, "q": 2.0, "p2": 2.0, "q2": 2.0, "beta": 1.0, "gamma": 0.25},
            {"p": 1.5, "q": 3.0, "p2": 2.0, "q2": 2.0, "beta": 1.0, "gamma": 0.2},
        ],
    )


def default_general_config() -> SuiteConfig:
    return SuiteConfig(
        suite="heisenberg-general",
        grid=GridConfig(n_dims=1, extent=64.0, points_per_axis=1024),
        corpus=CorpusConfig(size=6, noise_support=3.0, noise_width=1.5),
        sweep=SweepAxes(deltas=[0.25, 0.5, 1.0, 2.0, 4.0], lambdas=[0.5, 1.0, 2.0], dilation_members=2),
        exponents=[
            {"p1": 2.0, "q1": 2.0, "p2": 2.0, "q2": 2.0, "beta": 1.0},
            {"p1": 1.5, "q1": 3.0, "p2": 2.0, "q2": 2.0, "beta": 1.0},
        ],
    )


@dataclass(frozen=True)
class HeisenbergCase:
    """One admissible exponent set; s is gamma (small) or delta (general)."""

    index: int
    tup: ExponentTuple
    p: float
    q: float
    s: float

    @property
    def beta(self) -> float:
        return self.tup["beta"]

    @property
    def moment_share(self) -> float:
        return self.s / (self.beta + self.s)

    @property
    def smooth_share(self) -> float:
        return self.beta / (self.beta + self.s)


def small_case(index: int, tup: ExponentTuple) -> HeisenbergCase:
    return HeisenbergCase(index=index, tup=tup, p=tup["p"], q=tup["q"], s=tup["gamma"])


def general_case(index: int, tup: ExponentTuple) -> HeisenbergCase:
    return HeisenbergCase(index=index, tup=tup, p=tup["p1"], q=tup["q1"], s=tup["delta"])


class WeightBank:
    """Sampled |x|^beta and |x|^{-s} on one grid, shared by every cell."""

    def __init__(self, spec: GridSpec, cases: list[HeisenbergCase]) -> None:
        self.moments = {c.beta: sample(moment_weight(c.beta), spec) for c in cases}
        self.hardy = {c.s: sample(power_weight(c.s), spec) for c in cases}


def heisenberg_ratio(
    log: NormLog,
    weights: WeightBank,
    g: GridFunction,
    label: str,
    case: HeisenbergCase,
) -> dict[str, float]:
    """Both sides of the bound plus its Holder and Hardy steps, all on the log's ball family."""
    t = case.tup
    left = log.morrey(g, t["p0"], t["q0"], label)
    weighted = pointwise_multiply(weights.moments[case.beta], g)
    moment = log.morrey(weighted, t["p2"], t["q2"], f"|x|^{case.beta:g}*{label}")
    smooth = log.morrey(laplacian_power(g, case.s), case.p, case.q, f"{label}|z={case.s:g}")
    hardy = log.morrey(pointwise_multiply(weights.hardy[case.s], g), case.p, case.q, f"|x|^-{case.s:g}*{label}")
    a, b = case.moment_share, case.smooth_share
    right = moment**a * smooth**b
    holder = moment**a * hardy**b
    return {
        "left": left,
        "right": right,
        "holder_ratio": left / holder if holder else float("inf"),
        "hardy_ratio": hardy / smooth if smooth else float("inf"),
    }


def _row(f: AnalyticFunction, case: HeisenbergCase, lam: float, values: dict[str, float]) -> CaseRow:
    extra: dict[str, float | None] = {
        "holder_ratio": finite_or_none(values["holder_ratio"]),
        "hardy_ratio": finite_or_none(values["hardy_ratio"]),
    }
    for key in ("route_theta", "route_gamma", "route_ratio"):
        if key in values:
            extra[key] = finite_or_none(values[key])
    return CaseRow(
        function_id=f.label,
        function_class=f.corpus_class.value,
        params={"tuple": case.index, "s": case.s, "lambda": lam, "p0": case.tup["p0"], "q0": case.tup["q0"]},
        left=finite_or_none(values["left"]),
        right=finite_or_none(values["right"]),
        ratio=finite_ratio(values["left"], values["right"]),
        extra=extra,
    )


def _route_values(log: NormLog, g: GridFunction, label: str, case: HeisenbergCase) -> dict[str, float]:
    """Interpolation step ||(-Delta)^{gamma/2} g||_{M^p_q} <= ||g||^{1-theta} ||(-Delta)^{delta/2} g||^theta."""
    route = interpolation_route(case.tup)
    t = case.tup
    theta, gamma = route["theta"], route["gamma"]
    middle = log.morrey(laplacian_power(g, gamma), route["p"], route["q"], f"{label}|z={gamma:g}")
    base = log.morrey(g, t["p0"], t["q0"], label)
    top = log.morrey(laplacian_power(g, case.s), case.p, case.q, f"{label}|z={case.s:g}")
    bound = base ** (1.0 - theta) * top**theta
    return {"route_theta": theta, "route_gamma": gamma, "route_ratio": middle / bound if bound else float("inf")}


def _cell(
    ctx: SuiteContext,
    cases: list[HeisenbergCase],
    weights: WeightBank,
    item: tuple[AnalyticFunction, float],
) -> dict[str, Any]:
    f, lam = item
    scaled = dilate_fn(f, lam)
    g = sample(scaled, ctx.spec)
    log = NormLog(ctx.family)
    rows = []
    for case in cases:
        values = heisenberg_ratio(log, weights, g, scaled.label, case)
        if "interpolation-route" in case.tup.flags:
            values.update(_route_values(log, g, scaled.label, case))
        rows.append(_row(f, case, lam, values))
    return {"rows": rows, "norms": log.rows if lam == 1.0 else []}


def _dilation_items(
    corpus: list[AnalyticFunction], lambdas: list[float], members: int
) -> tuple[list[AnalyticFunction], list[tuple[AnalyticFunction, float]]]:
    """Gaussians carry the dilation sweep; every other member runs at lambda = 1 only."""
    dilated = [f for f in corpus if f.kind == FunctionKind.GAUSSIAN][:members]
    items = [(f, lam) for f in corpus for lam in (lambdas if f in dilated else [1.0])]
    return dilated, items


def _sweep(ctx: SuiteContext, cases: list[HeisenbergCase]) -> tuple[SuiteOutcome, dict[str, Any]]:
    spec = ctx.spec
    corpus = ctx.corpus()
    lambdas = require_lambdas(ctx.config.sweep.lambdas)
    dilated, items = _dilation_items(corpus, lambdas, ctx.config.sweep.dilation_members)
    clearance = support_clearance(corpus + [dilate_fn(f, lam) for f in dilated for lam in lambdas], spec)
    weights = WeightBank(spec, cases)

    results = run_cells(lambda item: _cell(ctx, cases, weights, item), items, threads=ctx.threads)
    outcome = SuiteOutcome(
        exponent_tuples=[c.tup for c in cases],
        grid=spec.to_dict(),
        origin_policy=ORIGIN_POLICY,
        corpus_classes=classes_of(corpus),
    )
    outcome.ball_families = {"lhs": ctx.family.describe(), "rhs": ctx.family.describe()}
    for result in results:
        outcome.rows.extend(result["rows"])
        outcome.norm_rows.extend(result["norms"])

    spreads: dict[str, float | None] = {}
    for f in dilated:
        for case in cases:
            values = [
                r.ratio
                for r in outcome.rows
                if r.function_id == f.label and r.params["tuple"] == case.index and r.params["s"] == case.s
            ]
            spreads[f"{f.label}|tuple={case.index}|s={case.s:g}"] = spread([v for v in values if v is not None])

    base_rows = [r for r in outcome.rows if r.params["lambda"] == 1.0]
    sup_ratio, witness = sup_with_witness(base_rows)
    reference = cases[0]
    reference_weights = WeightBank(spec, [reference])

    def sides_of(h: AnalyticFunction) -> tuple[float, float]:
        values = heisenberg_ratio(NormLog(ctx.family), reference_weights, sample(h, spec), h.label, reference)
        return values["left"], values["right"]

    homogeneity, gap, homogeneity_rows = homogeneity_criterion(sides_of, corpus[0], ctx.tolerances.homogeneity)
    outcome.check_rows.extend(homogeneity_rows)
    context = {
        "corpus": corpus,
        "weights": weights,
        "lambdas": lambdas,
        "spreads": spreads,
        "sup_ratio": sup_ratio,
        "witness": witness,
        "homogeneity": homogeneity,
        "homogeneity_gap": gap,
        "clearance": clearance,
        "base_rows": base_rows,
    }
    return outcome, context


def _common_criteria(outcome: SuiteOutcome, ctx: SuiteContext, sweep: dict[str, Any]) -> None:
    tol = ctx.tolerances
    holder = max_or_none(r.extra.get("holder_ratio") for r in outcome.rows)
    worst_spread = max_or_none(sweep["spreads"].values())
    outcome.summary.update(
        {
            "sup_ratio": sweep["sup_ratio"],
            "argmax": witness_summary(sweep["witness"]),
            "max_holder_ratio": holder,
            "dilation_spreads": sweep["spreads"],
            "max_dilation_spread": worst_spread,
            "lambdas": sweep["lambdas"],
            "homogeneity_gap": sweep["homogeneity_gap"],
            "seam_clearance": sweep["clearance"],
        }
    )
    outcome.check(
        criterion("sup-finite", "sup ratio over the corpus stays finite", sweep["sup_ratio"], tol.ratio_ceiling),
        criterion(
            "holder-step",
            "||g|| / (|| |x|^beta g ||^a || |x|^-s g ||^b), the Holder step alone",
            holder,
            1.0 + tol.holder,
        ),
    )
    if sweep["spreads"]:
        outcome.check(
            criterion(
                "dilation-spread",
                f"(max - min)/max of the ratio across lambda in {sweep['lambdas']} for Gaussians",
                worst_spread,
                tol.discretization,
            )
        )
    outcome.check(sweep["homogeneity"])
    outcome.spreads = {"max_dilation_spread": worst_spread}


def _boundary_check(ctx: SuiteContext, raw: dict[str, float]) -> tuple[dict[str, Any], list[CaseRow]]:
    """gamma = n/q must be rejected; gamma just inside must run to a finite ratio."""
    n = ctx.spec.n_dims
    edge = n / raw["q"]
    args = (raw["p"], raw["q"], raw["p2"], raw["q2"], raw["beta"])
    try:
        validate_heisenberg_small(*args, edge, n)
        rejected = False
    except HypothesisError:
        rejected = True
    inside = validate_heisenberg_small(*args, BOUNDARY_BACKOFF * edge, n)
    case = small_case(0, inside)
    f = ctx.corpus()[0]
    values = heisenberg_ratio(NormLog(ctx.family), WeightBank(ctx.spec, [case]), sample(f, ctx.spec), f.label, case)
    rows = [
        check_row("boundary-rejected", f, None, None, gamma=edge, rejected=int(rejected)),
        check_row("boundary-inside", f, values["left"], values["right"], gamma=case.s),
    ]
    summary = {
        "edge_gamma": edge,
        "rejected": rejected,
        "inside_gamma": case.s,
        "inside_ratio": rows[1].ratio,
    }
    return summary, rows


def run_small(ctx: SuiteContext) -> SuiteOutcome:
    config = ctx.config
    tol = ctx.tolerances
    n = ctx.spec.n_dims
    cases = [
        small_case(i, validate_heisenberg_small(t["p"], t["q"], t["p2"], t["q2"], t["beta"], t["gamma"], n))
        for i, t in enumerate(config.exponents)
    ]
    outcome, sweep = _sweep(ctx, cases)
    hardy = max_or_none(r.extra.get("hardy_ratio") for r in outcome.rows)
    boundary, boundary_rows = _boundary_check(ctx, config.exponents[0])
    outcome.check_rows.extend(boundary_rows)
    outcome.summary["max_hardy_step_ratio"] = hardy
    outcome.summary["boundary"] = boundary
    _common_criteria(outcome, ctx, sweep)
    outcome.check(
        criterion(
            "hardy-step",
            "|| |x|^-gamma g || / ||(-Delta)^{gamma/2} g|| stays finite",
            hardy,
            tol.ratio_ceiling,
        ),
        criterion(
            "boundary-rejected",
            "gamma = n/q fails validation (1 = rejected)",
            float(boundary["rejected"]),
            1.0,
            Comparison.GE,
        ),
        criterion(
            "boundary-inside",
            f"ratio at gamma = {BOUNDARY_BACKOFF:g} n/q stays finite",
            boundary["inside_ratio"],
            tol.ratio_ceiling,
        ),
    )
    outcome.stability = {"sup_ratio": sweep["sup_ratio"]}
    return outcome


def classical_ratios(config: CorpusConfig, spec: GridSpec) -> list[CaseRow]:
    """||g||_2^2 against ||x g||_2 ||(-Delta)^{1/2} g||_2 per function of a centered corpus."""
    corpus = build_corpus(config.model_copy(update={"size": CLASSICAL_CORPUS_SIZE, "shifts": [0.0]}))
    moment = sample(moment_weight(1.0), spec)
    rows = []
    for f in corpus:
        g = sample(f, spec)
        top = lebesgue_norm(pointwise_multiply(moment, g), 2.0) * lebesgue_norm(laplacian_power(g, 1.0), 2.0)
        rows.append(check_row("classical", f, lebesgue_norm(g, 2.0) ** 2, top))
    return rows


def _classical_check(rows: list[CaseRow]) -> dict[str, Any]:
    by_kind: dict[str, float] = {}
    for row in rows:
        if row.ratio is None:
            continue
        kind = row.function_id.rsplit("-", 1)[0]
        by_kind[kind] = max(by_kind.get(kind, 0.0), row.ratio)
    gaussian = by_kind.get(FunctionKind.GAUSSIAN.value)
    others = [v for k, v in by_kind.items() if k != FunctionKind.GAUSSIAN.value]
    lead = gaussian / max(others) if gaussian is not None and others else None
    return {"max_by_kind": by_kind, "gaussian_lead": lead, "sup": max_or_none(by_kind.values())}


def _small_path_rows(
    ctx: SuiteContext, outcome: SuiteOutcome, delegated: list[HeisenbergCase], f: AnalyticFunction
) -> list[CaseRow]:
    """Reruns the delta < n/q1 tuples as a heisenberg-small suite and pairs its rows with the general ones."""
    small_config = ctx.config.model_copy(
        update={
            "suite": SuiteId.HEISENBERG_SMALL,
            "exponents": [
                {"p": c.p, "q": c.q, "p2": c.tup["p2"], "q2": c.tup["q2"], "beta": c.beta, "gamma": c.s}
                for c in delegated
            ],
            "corpus": ctx.config.corpus.model_copy(update={"size": 1}),
            "sweep": ctx.config.sweep.model_copy(update={"lambdas": [1.0]}),
        }
    )
    small = run_small(SuiteContext(config=small_config, spec=ctx.spec, family=ctx.family, refine=ctx.refine))
    rows = []
    for k, case in enumerate(delegated):
        general = next(
            r
            for r in outcome.rows
            if r.function_id == f.label
            and r.params["tuple"] == case.index
            and r.params["s"] == case.s
            and r.params["lambda"] == 1.0
        )
        reference = next(r for r in small.rows if r.function_id == f.label and r.params["tuple"] == k)
        for route, row in (("general", general), ("small", reference)):
            rows.append(check_row("small-path", f, row.left, row.right, route=route, tuple=case.index, delta=case.s))
    return rows


def small_path_gap(rows: list[CaseRow]) -> float | None:
    """Largest relative gap between paired general and small ratios."""
    paired: dict[tuple[Any, Any], dict[str, float | None]] = {}
    for row in rows:
        if row.params.get("check") == "small-path":
            paired.setdefault((row.params["tuple"], row.params["delta"]), {})[str(row.params["route"])] = row.ratio
    gaps = [relative_gap(pair.get("general"), pair.get("small")) for pair in paired.values()]
    if not gaps or None in gaps:
        return None
    return max(g for g in gaps if g is not None)


def run_general(ctx: SuiteContext) -> SuiteOutcome:
    config = ctx.config
    tol = ctx.tolerances
    n = ctx.spec.n_dims
    cases: list[HeisenbergCase] = []
    for index, t in enumerate(config.exponents):
        for delta in config.sweep.deltas:
            tup = validate_heisenberg(t["p1"], t["q1"], t["p2"], t["q2"], t["beta"], delta, n)
            cases.append(general_case(index, tup))
    delegated = [c for c in cases if "interpolation-route" not in c.tup.flags]

    outcome, sweep = _sweep(ctx, cases)

    small_gap = None
    if delegated:
        outcome.check_rows.extend(_small_path_rows(ctx, outcome, delegated, sweep["corpus"][0]))
        small_gap = small_path_gap(outcome.check_rows)

    routes: dict[str, dict[str, float]] = {}
    per_delta: dict[str, float | None] = {}
    for case in cases:
        key = f"tuple={case.index}|delta={case.s:g}"
        per_delta[key] = max_or_none(
            r.ratio for r in sweep["base_rows"] if r.params["tuple"] == case.index and r.params["s"] == case.s
        )
        if "interpolation-route" in case.tup.flags:
            routes[key] = interpolation_route(case.tup)
    route_sup = max_or_none(r.extra.get("route_ratio") for r in outcome.rows)
    classical_rows = classical_ratios(ctx.config.corpus, ctx.spec)
    outcome.check_rows.extend(classical_rows)
    classical = _classical_check(classical_rows)

    outcome.summary.update(
        {
            "sup_ratio_by_delta": per_delta,
            "interpolation_route": routes,
            "max_route_ratio": route_sup,
            "small_path_gap": small_gap,
            "classical": classical,
        }
    )
    _common_criteria(outcome, ctx, sweep)
    if delegated:
        outcome.check(
            criterion(
                "small-path",
                "delta < n/q1: general ratio against an independent heisenberg-small run, relative gap",
                small_gap,
                tol.exact,
            )
        )
    if route_sup is not None:
        outcome.check(
            criterion(
                "route-finite",
                "interpolation step of the large-delta route stays finite",
                route_sup,
                tol.ratio_ceiling,
            )
        )
    outcome.check(
        criterion(
            "classical-gaussian",
            "all-L2 beta = delta = 1: max Gaussian ratio / max ratio of any other kind",
            classical["gaussian_lead"],
            1.0,
            Comparison.GE,
        )
    )
    outcome.stability = {f"sup_ratio[{key}]": value for key, value in per_delta.items()}
    return outcome
