"""Shared plumbing for the inequality suites: context, criteria, norm bookkeeping."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from morreygate.errors import SupportError
from morreygate.grid import GridFunction, GridSpec, build_grid
from morreygate.models import (
    CaseRow,
    Comparison,
    Criterion,
    ExponentTuple,
    SuiteConfig,
    Tolerances,
    Verdict,
    ZeroModeRule,
)
from morreygate.norms import BallFamily, NormResult, ball_family, morrey_norm
from morreygate.spectral import describe_zero_mode
from morreygate.testfns import AnalyticFunction, audit_corpus_support, build_corpus, scalar

logger = logging.getLogger(__name__)

HOMOGENEITY_SCALAR = 2.5


def finite_or_none(value: Any) -> float | None:
    if value is None:
        return None
    number = float(value)
    return number if math.isfinite(number) else None


@dataclass
class SuiteContext:
    """Everything a suite needs for one resolution: the config, its grid and ball family."""

    config: SuiteConfig
    spec: GridSpec
    family: BallFamily
    refine: bool = False

    @property
    def tolerances(self) -> Tolerances:
        return self.config.tolerances

    @property
    def threads(self) -> int:
        return self.config.threads

    def corpus(self) -> list[AnalyticFunction]:
        return build_corpus(self.config.corpus)

    def with_spec(self, spec: GridSpec) -> SuiteContext:
        family = ball_family(spec, stride=self.config.ball_stride, ratio=self.config.ball_ratio)
        return SuiteContext(config=self.config, spec=spec, family=family, refine=self.refine)


def build_context(config: SuiteConfig, *, refine: bool = False) -> SuiteContext:
    spec = build_grid(config.grid.n_dims, config.grid.extent, config.grid.points_per_axis)
    if refine:
        spec = spec.refined()
    family = ball_family(spec, stride=config.ball_stride, ratio=config.ball_ratio)
    return SuiteContext(config=config, spec=spec, family=family, refine=refine)


@dataclass
class NormLog:
    """Morrey norms computed by one sweep cell, cached by (function id, p, q)."""

    family: BallFamily
    rows: list[list[Any]] = field(default_factory=list)
    _cache: dict[tuple[str, float, float], NormResult] = field(default_factory=dict)

    def morrey(self, f: GridFunction, p: float, q: float, function_id: str) -> float:
        return self.result(f, p, q, function_id).value

    def result(self, f: GridFunction, p: float, q: float, function_id: str) -> NormResult:
        key = (function_id, p, q)
        if key not in self._cache:
            result = morrey_norm(f, p, q, self.family)
            self._cache[key] = result
            self.rows.append(result.as_row(function_id, p, q))
        return self._cache[key]


@dataclass
class SuiteOutcome:
    """What a suite hands back to the registry; the registry turns it into a SuiteReport."""

    rows: list[CaseRow] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    criteria: list[Criterion] = field(default_factory=list)
    exponent_tuples: list[ExponentTuple] = field(default_factory=list)
    norm_rows: list[list[Any]] = field(default_factory=list)
    ball_families: dict[str, dict[str, Any]] = field(default_factory=dict)
    grid: dict[str, Any] = field(default_factory=dict)
    zero_mode_policy: str = describe_zero_mode(ZeroModeRule.ZERO)
    origin_policy: str | None = None
    corpus_classes: list[str] = field(default_factory=list)
    # Summary values compared between base and refined runs.
    stability: dict[str, float | None] = field(default_factory=dict)
    # Dilation spreads; under refinement they must tighten, and land in the refined band.
    spreads: dict[str, float | None] = field(default_factory=dict)
    # Per-case values behind aggregate criteria, tagged with params["check"].
    check_rows: list[CaseRow] = field(default_factory=list)

    def check(self, *criteria: Criterion) -> None:
        self.criteria.extend(criteria)


def criterion(
    name: str,
    description: str,
    observed: float | None,
    bound: float,
    comparison: Comparison = Comparison.LE,
) -> Criterion:
    value = finite_or_none(observed)
    match comparison:
        case Comparison.LE:
            ok = value is not None and value <= bound
        case Comparison.GE:
            ok = value is not None and value >= bound
        case Comparison.ABS_LE:
            ok = value is not None and abs(value) <= bound
        case _:
            raise ValueError(f"Unknown comparison: {comparison}")
    return Criterion(
        name=name,
        description=description,
        observed=value,
        bound=bound,
        comparison=comparison,
        verdict=Verdict.PASS if ok else Verdict.FAIL,
    )


def finite_ratio(a: float, b: float) -> float | None:
    if b == 0 or not math.isfinite(a) or not math.isfinite(b):
        return None
    return a / b


def relative_gap(a: float | None, b: float | None) -> float | None:
    if a is None or b is None:
        return None
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def max_or_none(values: Iterable[float | None]) -> float | None:
    usable = [v for v in values if v is not None and math.isfinite(v)]
    if not usable:
        return None
    return max(usable)


def sup_with_witness(rows: Sequence[CaseRow]) -> tuple[float | None, CaseRow | None]:
    """Largest ratio; ties go to the first row, which is the lowest function id in sweep order."""
    best: CaseRow | None = None
    for row in rows:
        if row.ratio is None:
            continue
        if best is None or row.ratio > (best.ratio or -math.inf):
            best = row
    return (best.ratio if best else None), best


def witness_summary(row: CaseRow | None) -> dict[str, Any] | None:
    if row is None:
        return None
    return {"function_id": row.function_id, "params": dict(row.params)}


def check_row(
    check: str,
    f: AnalyticFunction,
    left: float | None,
    right: float | None,
    ratio: float | None = None,
    **params: float | int | str,
) -> CaseRow:
    """A row behind an aggregate criterion; ratio defaults to left / right."""
    left, right = finite_or_none(left), finite_or_none(right)
    if ratio is None and left is not None and right is not None:
        ratio = finite_ratio(left, right)
    return CaseRow(
        function_id=f.label,
        function_class=f.corpus_class.value,
        params={"check": check, **params},
        left=left,
        right=right,
        ratio=finite_or_none(ratio),
    )


def homogeneity_criterion(
    sides_of: Callable[[AnalyticFunction], tuple[float, float]],
    f: AnalyticFunction,
    tolerance: float,
) -> tuple[Criterion, float | None, list[CaseRow]]:
    """Compare ratio(f) with ratio(c f) for c = HOMOGENEITY_SCALAR; one check row per scalar."""
    rows = []
    for c in (1.0, HOMOGENEITY_SCALAR):
        left, right = sides_of(f if c == 1.0 else scalar(f, c))
        rows.append(check_row("homogeneity", f, left, right, scalar=c))
    gap = relative_gap(rows[0].ratio, rows[1].ratio)
    return (
        criterion(
            "homogeneity",
            f"ratio unchanged when {f.label} is multiplied by {HOMOGENEITY_SCALAR:g}",
            gap,
            tolerance,
        ),
        gap,
        rows,
    )


def support_clearance(corpus: Sequence[AnalyticFunction], spec: GridSpec) -> float | None:
    """Seam clearance of the whole corpus; raises SupportError before any work is done."""
    worst = audit_corpus_support(corpus, spec)
    logger.debug("corpus seam clearance %.4g on L=%g", worst, spec.extent)
    return finite_or_none(worst)


def classes_of(corpus: Iterable[AnalyticFunction]) -> list[str]:
    return sorted({f.corpus_class.value for f in corpus})


def require_lambdas(lambdas: Sequence[float]) -> list[float]:
    values = sorted(set(lambdas) | {1.0})
    if any(lam <= 0 for lam in values):
        raise SupportError(f"dilation factors must be positive, got {list(lambdas)}")
    return values
