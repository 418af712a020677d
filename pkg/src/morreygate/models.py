from __future__ import annotations

from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from morreygate.constants import BALL_RATIO, DEFAULT_TOLERANCES, REPORT_VERSION


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class Comparison(str, Enum):
    LE = "<="
    GE = ">="
    ABS_LE = "|x|<="


class CorpusClass(str, Enum):
    COMPACT = "compact"
    GAUSSIAN = "gaussian"
    WEIGHT = "weight"


class TheoremTag(str, Enum):
    IU_BOUND = "iu-bound"
    INTERPOLATION = "interpolation"
    OLSEN = "olsen"
    HARDY = "hardy"
    HEISENBERG_SMALL = "heisenberg-small"
    HEISENBERG_GENERAL = "heisenberg-general"


class FunctionKind(str, Enum):
    BUMP = "bump"
    GAUSSIAN = "gaussian"
    POWER_WEIGHT = "power_weight"
    MOLLIFIED_NOISE = "mollified_noise"
    PRODUCT = "product"
    DILATE = "dilate"
    TRANSLATE = "translate"
    SCALAR = "scalar"
    SUM = "sum"


class ZeroModeRule(str, Enum):
    ZERO = "zero"
    SKIP_ERROR = "skip-error"


# --- Exponents ---


class ExponentTuple(BaseModel):
    model_config = ConfigDict(frozen=True)

    theorem_tag: TheoremTag
    n: int | None = None
    values: dict[str, float]
    lhs_dilation_exponent: float | None = None
    rhs_dilation_exponent: float | None = None
    flags: list[str] = Field(default_factory=list)

    def __getitem__(self, key: str) -> float:
        return self.values[key]

    @property
    def dilation_residual(self) -> float:
        if self.lhs_dilation_exponent is None or self.rhs_dilation_exponent is None:
            return 0.0
        return abs(self.lhs_dilation_exponent - self.rhs_dilation_exponent)


# --- Suite configuration ---


class GridConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_dims: int = 1
    extent: float = 32.0
    points_per_axis: int = 512


class CorpusConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kinds: list[FunctionKind] = Field(
        default_factory=lambda: [FunctionKind.BUMP, FunctionKind.GAUSSIAN, FunctionKind.MOLLIFIED_NOISE]
    )
    size: int = 6
    seed: int = 7
    bump_radii: list[float] = Field(default_factory=lambda: [1.0, 1.5, 2.0])
    sigmas: list[float] = Field(default_factory=lambda: [1.0, 0.75])
    noise_support: float = 2.0
    noise_width: float = 0.5
    shifts: list[float] = Field(default_factory=lambda: [0.0])


class DecayCase(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_dims: int
    alpha: float
    extent: float
    points_per_axis: int
    bump_radius: float = 1.0


class SweepAxes(BaseModel):
    model_config = ConfigDict(extra="forbid")

    u_values: list[float] = Field(default_factory=list)
    alphas: list[float] = Field(default_factory=list)
    thetas: list[float] = Field(default_factory=list)
    lambdas: list[float] = Field(default_factory=list)
    deltas: list[float] = Field(default_factory=list)
    v_values: list[float] = Field(default_factory=list)
    w_values: list[float] = Field(default_factory=list)
    w_include_infinity: bool = True
    dimensions: list[int] = Field(default_factory=list)
    decay_cases: list[DecayCase] = Field(default_factory=list)
    ball_radii: list[float] = Field(default_factory=list)
    dilation_members: int = 2
    u_fit_range: tuple[float, float] = (10.0, 100.0)
    u_band_range: tuple[float, float] = (1.0, 50.0)
    trend_threshold: float = 10.0


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    exact: float = DEFAULT_TOLERANCES["exact"]
    lattice: float = DEFAULT_TOLERANCES["lattice"]
    isometry: float = DEFAULT_TOLERANCES["isometry"]
    homogeneity: float = DEFAULT_TOLERANCES["homogeneity"]
    discretization: float = DEFAULT_TOLERANCES["discretization"]
    refined_discretization: float = DEFAULT_TOLERANCES["refined_discretization"]
    refine_drift: float = DEFAULT_TOLERANCES["refine_drift"]
    holder: float = DEFAULT_TOLERANCES["holder"]
    slope: float = DEFAULT_TOLERANCES["slope"]
    slope_stability: float = DEFAULT_TOLERANCES["slope_stability"]
    kernel_slope: float = DEFAULT_TOLERANCES["kernel_slope"]
    trend: float = DEFAULT_TOLERANCES["trend"]
    zero_mode: float = DEFAULT_TOLERANCES["zero_mode"]
    calibration: float = DEFAULT_TOLERANCES["calibration"]
    ratio_ceiling: float = DEFAULT_TOLERANCES["ratio_ceiling"]
    identity_limit: float = DEFAULT_TOLERANCES["identity_limit"]


class SuiteConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    suite: str
    grid: GridConfig = Field(default_factory=GridConfig)
    corpus: CorpusConfig = Field(default_factory=CorpusConfig)
    sweep: SweepAxes = Field(default_factory=SweepAxes)
    exponents: list[dict[str, float]] = Field(default_factory=list)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    ball_stride: int | None = None
    ball_ratio: float = BALL_RATIO
    threads: int = 1
    out_dir: str | None = None


# --- Reports ---


class CaseRow(BaseModel):
    function_id: str
    function_class: str
    params: dict[str, float | int | str] = Field(default_factory=dict)
    left: float | None = None
    right: float | None = None
    ratio: float | None = None
    extra: dict[str, float | None] = Field(default_factory=dict)


class Criterion(BaseModel):
    name: str
    description: str
    observed: float | None
    bound: float
    comparison: Comparison
    verdict: Verdict


class Provenance(BaseModel):
    config_hash: str
    threads: int
    morrey_norm_is_lower_bound: bool = True
    lower_bound_note: str = (
        "Morrey norms are maxima over a finite ball family and therefore certified lower bounds of the "
        "continuum supremum; LHS and RHS use the same family."
    )
    zero_mode_policy: str = ""
    origin_policy: str | None = None
    seam_policy: str = "balls are clipped at the box boundary and never wrap"
    corpus_classes: list[str] = Field(default_factory=list)


class StabilityMetric(BaseModel):
    name: str
    base: float | None
    refined: float | None
    drift: float | None


class StabilityBlock(BaseModel):
    refined_grid: dict[str, Any]
    metrics: list[StabilityMetric] = Field(default_factory=list)
    criteria: list[Criterion] = Field(default_factory=list)


class SuiteReport(BaseModel):
    version: str = REPORT_VERSION
    suite: str
    config_hash: str
    config: dict[str, Any]
    grid: dict[str, Any]
    ball_families: dict[str, dict[str, Any]] = Field(default_factory=dict)
    exponent_tuples: list[ExponentTuple] = Field(default_factory=list)
    rows: list[CaseRow] = Field(default_factory=list)
    summary: dict[str, Any] = Field(default_factory=dict)
    criteria: list[Criterion] = Field(default_factory=list)
    provenance: Provenance
    stability: StabilityBlock | None = None
    status: Verdict = Verdict.PASS


# --- Run metadata and merged summaries ---


class EnvironmentInfo(BaseModel):
    python_version: str
    platform: str
    cpu_count: int | None = None
    packages: dict[str, str] = Field(default_factory=dict)


class RunMetadata(BaseModel):
    run_id: str
    suite: str
    started_at: str
    completed_at: str
    duration_ms: int
    config_source: str
    threads: int
    refine: bool
    environment: EnvironmentInfo


class ReportDigest(BaseModel):
    suite: str
    status: Verdict
    config_hash: str
    path: str
    failed_criteria: list[str] = Field(default_factory=list)


class MergedSummary(BaseModel):
    status: Verdict
    reports: list[ReportDigest]
