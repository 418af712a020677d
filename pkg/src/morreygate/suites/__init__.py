from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np

from morreygate.config import config_hash
from morreygate.constants import SuiteId
from morreygate.errors import UnknownSuiteError
from morreygate.models import (
    Criterion,
    Provenance,
    StabilityBlock,
    StabilityMetric,
    SuiteConfig,
    SuiteReport,
    Verdict,
)
from morreygate.suites import (
    decay,
    hardy,
    heisenberg,
    interpolation,
    iu_bound,
    kernel_constant,
    olsen,
    roundtrip,
    uniform_local_bound,
)
from morreygate.suites.common import SuiteContext, SuiteOutcome, build_context, criterion, relative_gap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteEntry:
    run: Callable[[SuiteContext], SuiteOutcome]
    default_config: Callable[[], SuiteConfig]
    description: str


SUITES: dict[str, SuiteEntry] = {
    SuiteId.IU_BOUND: SuiteEntry(
        iu_bound.run,
        iu_bound.default_config,
        "imaginary powers: ||(-Delta)^{iu/2} f||_{M^p_q} against (1+|u|)^{n/2} ||f||_{M^p_q}",
    ),
    SuiteId.KERNEL_CONSTANT: SuiteEntry(
        kernel_constant.run,
        kernel_constant.default_config,
        "growth of the imaginary-power kernel constant and the gamma identities behind it",
    ),
    SuiteId.INTERPOLATION: SuiteEntry(
        interpolation.run,
        interpolation.default_config,
        "Morrey interpolation through (-Delta)^{alpha theta/2}",
    ),
    SuiteId.UNIFORM_LOCAL_BOUND: SuiteEntry(
        uniform_local_bound.run,
        uniform_local_bound.default_config,
        "local L^w(B) norms of (-Delta)^{alpha v/2} f, uniform in v and w",
    ),
    SuiteId.OLSEN: SuiteEntry(
        olsen.run,
        olsen.default_config,
        "Olsen-type weighted bound with W = |x|^{-alpha}",
    ),
    SuiteId.HARDY: SuiteEntry(
        hardy.run,
        hardy.default_config,
        "Hardy inequality || |x|^{-alpha} g ||_{M^p_q} <= C ||(-Delta)^{alpha/2} g||_{M^p_q}",
    ),
    SuiteId.DECAY: SuiteEntry(
        decay.run,
        decay.default_config,
        "far-field decay |x|^{-n-alpha} of (-Delta)^{alpha/2} applied to a bump",
    ),
    SuiteId.ROUNDTRIP: SuiteEntry(
        roundtrip.run,
        roundtrip.default_config,
        "(-Delta)^{-alpha/2} (-Delta)^{alpha/2} g = g and the Morrey <= L^q <= L^inf-L^1 chain",
    ),
    SuiteId.HEISENBERG_SMALL: SuiteEntry(
        heisenberg.run_small,
        heisenberg.default_small_config,
        "Heisenberg-type bound for 0 < gamma < n/q with Holder and Hardy steps audited",
    ),
    SuiteId.HEISENBERG_GENERAL: SuiteEntry(
        heisenberg.run_general,
        heisenberg.default_general_config,
        "Heisenberg-type bound for any delta > 0, including the interpolation route",
    ),
}


def list_suites() -> list[tuple[str, str]]:
    return [(suite_id, entry.description) for suite_id, entry in SUITES.items()]


def get_suite(suite_id: str) -> SuiteEntry:
    if suite_id not in SUITES:
        raise UnknownSuiteError(suite_id, list(SUITES))
    return SUITES[suite_id]


def default_config(suite_id: str) -> SuiteConfig:
    return get_suite(suite_id).default_config()


def run_suite(config: SuiteConfig, *, refine: bool = False) -> tuple[SuiteReport, SuiteOutcome]:
    """Run one suite at the configured resolution and, with refine, again at (2L, 4N)."""
    entry = get_suite(config.suite)
    logger.info("running suite %s", config.suite)
    outcome = entry.run(build_context(config))
    stability = None
    if refine:
        logger.info("refined rerun of %s", config.suite)
        refined = entry.run(build_context(config, refine=True))
        stability = _stability_block(config, outcome, refined)
    return _build_report(config, outcome, stability), outcome


def _stability_block(config: SuiteConfig, base: SuiteOutcome, refined: SuiteOutcome) -> StabilityBlock:
    tol = config.tolerances
    metrics: list[StabilityMetric] = []
    criteria: list[Criterion] = []
    for name, value in base.stability.items():
        other = refined.stability.get(name)
        drift = relative_gap(value, other)
        metrics.append(StabilityMetric(name=name, base=value, refined=other, drift=drift))
        criteria.append(
            criterion(f"refine-drift[{name}]", f"relative change of {name} under refinement", drift, tol.refine_drift)
        )
    for name, value in base.spreads.items():
        if value is None:
            continue
        other = refined.spreads.get(name)
        tightening = None if other is None else other - value
        criteria.append(
            criterion(
                f"spread-tightens[{name}]",
                f"{name} on the refined grid minus {name} on the base grid",
                tightening,
                tol.exact,
            )
        )
    for name, value in refined.spreads.items():
        criteria.append(
            criterion(
                f"refined-spread[{name}]",
                f"{name} on the refined grid",
                value,
                tol.refined_discretization,
            )
        )
    return StabilityBlock(refined_grid=_json_safe(refined.grid), metrics=metrics, criteria=criteria)


def _json_safe(value: Any) -> Any:
    """Plain-JSON copy: numpy scalars unwrapped, non-finite floats as null."""
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _build_report(config: SuiteConfig, outcome: SuiteOutcome, stability: StabilityBlock | None) -> SuiteReport:
    failed = [c for c in outcome.criteria if c.verdict == Verdict.FAIL]
    if stability is not None:
        failed += [c for c in stability.criteria if c.verdict == Verdict.FAIL]
    payload = config.model_dump(mode="json")
    payload.pop("out_dir", None)
    return SuiteReport(
        suite=config.suite,
        config_hash=config_hash(config),
        config=payload,
        grid=_json_safe(outcome.grid),
        ball_families=_json_safe(outcome.ball_families),
        exponent_tuples=outcome.exponent_tuples,
        rows=outcome.rows + outcome.check_rows,
        summary=_json_safe(outcome.summary),
        criteria=outcome.criteria,
        provenance=Provenance(
            config_hash=config_hash(config),
            threads=config.threads,
            zero_mode_policy=outcome.zero_mode_policy,
            origin_policy=outcome.origin_policy,
            corpus_classes=outcome.corpus_classes,
        ),
        stability=stability,
        status=Verdict.FAIL if failed else Verdict.PASS,
    )
