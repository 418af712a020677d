"""Closed-form test functions: descriptors that evaluate exactly at any point.

An AnalyticFunction is a small expression tree. Leaves are bumps, Gaussians,
power weights and mollified noise; inner nodes are products, sums, scalar
multiples, dilations f(lambda x) and translations f(x - s). Gaussians and their
affine images carry closed-form transforms under
    f^(xi) = int f(x) exp(-i x.xi) dx.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict

from morreygate.constants import GAUSSIAN_SUPPORT_SIGMAS, SEAM_MARGIN_CELLS
from morreygate.errors import ExponentError, OracleError, SingularEvaluationError, SupportError
from morreygate.models import CorpusClass, CorpusConfig, FunctionKind

Coordinates = Sequence[np.ndarray]

ORIGIN_POLICY = "power weight: lattice points with |x| < h/4 are evaluated at |x| = h/2"


class GaussianTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    amplitude: float
    center: tuple[float, ...]
    sigma: float


class AnalyticFunction(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: FunctionKind
    label: str = ""
    center: tuple[float, ...] = ()
    radius: float | None = None
    amplitude: float = 1.0
    sigma: float | None = None
    alpha: float | None = None
    factor: float | None = None
    shift: tuple[float, ...] = ()
    seed: int | None = None
    width: float | None = None
    operands: tuple[AnalyticFunction, ...] = ()

    # --- evaluation ---

    def evaluate(self, coords: Coordinates, spacing: float | None = None) -> np.ndarray:
        """Values at the given coordinate arrays (one array per axis, all of one shape)."""
        match self.kind:
            case FunctionKind.BUMP:
                return self.amplitude * _bump_profile(_offset(coords, self.center), self.radius or 1.0)
            case FunctionKind.GAUSSIAN:
                r2 = _squared_norm(_offset(coords, self.center))
                return (self.amplitude * np.exp(-r2 / (2.0 * (self.sigma or 1.0) ** 2))).astype(np.complex128)
            case FunctionKind.POWER_WEIGHT:
                return _power_weight_values(coords, self.alpha or 0.0, spacing)
            case FunctionKind.MOLLIFIED_NOISE:
                return _noise_values(self, coords)
            case FunctionKind.PRODUCT:
                out = np.ones(np.shape(coords[0]), dtype=np.complex128)
                for op in self.operands:
                    out = out * op.evaluate(coords, spacing)
                return out
            case FunctionKind.SUM:
                out = np.zeros(np.shape(coords[0]), dtype=np.complex128)
                for op in self.operands:
                    out = out + op.evaluate(coords, spacing)
                return out
            case FunctionKind.SCALAR:
                return self.amplitude * self.operands[0].evaluate(coords, spacing)
            case FunctionKind.DILATE:
                lam = self.factor or 1.0
                scaled_spacing = None if spacing is None else spacing * lam
                return self.operands[0].evaluate([c * lam for c in coords], scaled_spacing)
            case FunctionKind.TRANSLATE:
                return self.operands[0].evaluate(_offset(coords, self.shift), spacing)
            case _:
                raise ValueError(f"Unknown function kind: {self.kind}")

    def __call__(self, *point: float) -> complex:
        coords = [np.asarray([float(x)]) for x in point]
        return complex(self.evaluate(coords)[0])

    # --- transforms ---

    def gaussian_terms(self) -> list[GaussianTerm]:
        """Decompose into amplitude * exp(-|x-c|^2/(2 sigma^2)) terms, or raise OracleError."""
        match self.kind:
            case FunctionKind.GAUSSIAN:
                return [GaussianTerm(amplitude=self.amplitude, center=self.center, sigma=self.sigma or 1.0)]
            case FunctionKind.SUM:
                return [t for op in self.operands for t in op.gaussian_terms()]
            case FunctionKind.SCALAR:
                return [
                    t.model_copy(update={"amplitude": self.amplitude * t.amplitude})
                    for t in self.operands[0].gaussian_terms()
                ]
            case FunctionKind.DILATE:
                lam = self.factor or 1.0
                return [
                    GaussianTerm(amplitude=t.amplitude, center=tuple(c / lam for c in t.center), sigma=t.sigma / lam)
                    for t in self.operands[0].gaussian_terms()
                ]
            case FunctionKind.TRANSLATE:
                return [
                    GaussianTerm(amplitude=t.amplitude, center=_add_vectors(t.center, self.shift), sigma=t.sigma)
                    for t in self.operands[0].gaussian_terms()
                ]
            case _:
                raise OracleError(f"{self.label or self.kind.value} has no closed-form transform")

    @property
    def has_transform(self) -> bool:
        try:
            self.gaussian_terms()
        except OracleError:
            return False
        return True

    def transform(self, xi: Coordinates) -> np.ndarray:
        n = len(xi)
        k2 = _squared_norm(xi)
        out = np.zeros(np.shape(xi[0]), dtype=np.complex128)
        for term in self.gaussian_terms():
            phase = sum(c * k for c, k in zip(_pad(term.center, n), xi))
            scale = term.amplitude * (2.0 * math.pi * term.sigma**2) ** (n / 2.0)
            out = out + scale * np.exp(-(term.sigma**2) * k2 / 2.0 - 1j * phase)
        return out

    # --- support bookkeeping ---

    def support_radius(self) -> float | None:
        """Radius of a ball about the origin containing the exact support, or None if not compact."""
        match self.kind:
            case FunctionKind.BUMP:
                return _norm(self.center) + (self.radius or 1.0)
            case FunctionKind.MOLLIFIED_NOISE:
                return _norm(self.center) + (self.radius or 0.0) + (self.width or 0.0)
            case FunctionKind.GAUSSIAN | FunctionKind.POWER_WEIGHT:
                return None
            case FunctionKind.PRODUCT:
                radii = [r for r in (op.support_radius() for op in self.operands) if r is not None]
                return min(radii) if radii else None
            case FunctionKind.SUM:
                radii = [op.support_radius() for op in self.operands]
                return None if any(r is None for r in radii) else max(r for r in radii if r is not None)
            case FunctionKind.SCALAR:
                return self.operands[0].support_radius()
            case FunctionKind.DILATE:
                inner = self.operands[0].support_radius()
                return None if inner is None else inner / (self.factor or 1.0)
            case FunctionKind.TRANSLATE:
                inner = self.operands[0].support_radius()
                return None if inner is None else inner + _norm(self.shift)
            case _:
                return None

    def effective_radius(self) -> float:
        """Like support_radius, with Gaussians cut at GAUSSIAN_SUPPORT_SIGMAS and weights unbounded."""
        match self.kind:
            case FunctionKind.GAUSSIAN:
                return _norm(self.center) + GAUSSIAN_SUPPORT_SIGMAS * (self.sigma or 1.0)
            case FunctionKind.POWER_WEIGHT:
                return math.inf
            case FunctionKind.PRODUCT:
                return min(op.effective_radius() for op in self.operands)
            case FunctionKind.SUM:
                return max(op.effective_radius() for op in self.operands)
            case FunctionKind.SCALAR:
                return self.operands[0].effective_radius()
            case FunctionKind.DILATE:
                return self.operands[0].effective_radius() / (self.factor or 1.0)
            case FunctionKind.TRANSLATE:
                return self.operands[0].effective_radius() + _norm(self.shift)
            case _:
                radius = self.support_radius()
                return math.inf if radius is None else radius

    @property
    def corpus_class(self) -> CorpusClass:
        if self.support_radius() is not None:
            return CorpusClass.COMPACT
        if math.isfinite(self.effective_radius()):
            return CorpusClass.GAUSSIAN
        return CorpusClass.WEIGHT

    def evaluation_notes(self) -> list[str]:
        if self.kind == FunctionKind.POWER_WEIGHT:
            return [ORIGIN_POLICY]
        notes: list[str] = []
        for op in self.operands:
            notes.extend(n for n in op.evaluation_notes() if n not in notes)
        return notes

    def descriptor(self) -> dict[str, Any]:
        return self.model_dump(mode="json", exclude_defaults=True)


AnalyticFunction.model_rebuild()


# --- helpers ---


def _pad(vector: Sequence[float], n: int) -> tuple[float, ...]:
    return tuple(vector[:n]) + (0.0,) * max(0, n - len(vector))


def _offset(coords: Coordinates, center: Sequence[float]) -> list[np.ndarray]:
    return [c - x0 for c, x0 in zip(coords, _pad(center, len(coords)))]


def _squared_norm(parts: Coordinates) -> np.ndarray:
    return sum(np.asarray(p, dtype=float) ** 2 for p in parts)  # type: ignore[return-value]


def _norm(vector: Sequence[float]) -> float:
    return math.sqrt(sum(v * v for v in vector))


def _add_vectors(a: Sequence[float], b: Sequence[float]) -> tuple[float, ...]:
    n = max(len(a), len(b))
    return tuple(x + y for x, y in zip(_pad(a, n), _pad(b, n)))


def _bump_profile(parts: Coordinates, radius: float) -> np.ndarray:
    s = _squared_norm(parts) / (radius * radius)
    out = np.zeros(np.shape(s), dtype=np.complex128)
    inside = s < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside]))
    return out


def _power_weight_values(coords: Coordinates, alpha: float, spacing: float | None) -> np.ndarray:
    r = np.sqrt(_squared_norm(coords))
    if spacing is None:
        if alpha > 0 and np.any(r == 0.0):
            raise SingularEvaluationError("power weight evaluated at the origin without a lattice spacing")
    else:
        r = np.where(r < spacing / 4.0, spacing / 2.0, r)
    return (r ** (-alpha)).astype(np.complex128)


def _noise_nodes(n: int, support: float, width: float) -> np.ndarray:
    step = width / 2.0
    count = int(math.floor(support / step))
    ticks = step * np.arange(-count, count + 1)
    mesh = np.meshgrid(*([ticks] * n), indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=1)
    return nodes[np.sqrt(np.sum(nodes**2, axis=1)) <= support]


def _noise_values(f: AnalyticFunction, coords: Coordinates) -> np.ndarray:
    n = len(coords)
    support = f.radius or 0.0
    width = f.width or 0.0
    nodes = _noise_nodes(n, support, width)
    weights = np.random.default_rng([f.seed or 0, n]).standard_normal(len(nodes))
    local = _offset(coords, f.center)
    out = np.zeros(np.shape(coords[0]), dtype=np.complex128)
    for node, weight in zip(nodes, weights):
        out += weight * _bump_profile(_offset(local, node), width)
    return f.amplitude * out * _bump_profile(local, support + width)


# --- constructors ---


def _as_center(center: float | Sequence[float]) -> tuple[float, ...]:
    if isinstance(center, (int, float)):
        return (float(center),)
    return tuple(float(c) for c in center)


def bump(center: float | Sequence[float] = 0.0, radius: float = 1.0, amplitude: float = 1.0) -> AnalyticFunction:
    if radius <= 0:
        raise SupportError(f"bump radius must be positive, got {radius}")
    return AnalyticFunction(
        kind=FunctionKind.BUMP,
        label=f"bump(r={radius:g})",
        center=_as_center(center),
        radius=radius,
        amplitude=amplitude,
    )


def gaussian(center: float | Sequence[float] = 0.0, sigma: float = 1.0, amplitude: float = 1.0) -> AnalyticFunction:
    if sigma <= 0:
        raise SupportError(f"gaussian sigma must be positive, got {sigma}")
    return AnalyticFunction(
        kind=FunctionKind.GAUSSIAN,
        label=f"gaussian(s={sigma:g})",
        center=_as_center(center),
        sigma=sigma,
        amplitude=amplitude,
    )


def power_weight(alpha: float) -> AnalyticFunction:
    if alpha <= 0:
        raise ExponentError(f"power weight exponent must be positive, got {alpha}")
    return AnalyticFunction(kind=FunctionKind.POWER_WEIGHT, label=f"weight(a={alpha:g})", alpha=alpha)


def moment_weight(beta: float) -> AnalyticFunction:
    """|x|^beta, sampled with the same origin policy as power_weight so the two weights cancel pointwise."""
    if beta <= 0:
        raise ExponentError(f"moment exponent must be positive, got {beta}")
    return AnalyticFunction(kind=FunctionKind.POWER_WEIGHT, label=f"moment(b={beta:g})", alpha=-beta)


def mollified_noise(
    seed: int,
    support_radius: float,
    smoothing_width: float,
    center: float | Sequence[float] = 0.0,
) -> AnalyticFunction:
    if not 0 < smoothing_width < support_radius:
        raise SupportError(f"need 0 < smoothing width < support radius, got {smoothing_width}, {support_radius}")
    return AnalyticFunction(
        kind=FunctionKind.MOLLIFIED_NOISE,
        label=f"noise(seed={seed})",
        center=_as_center(center),
        radius=support_radius,
        width=smoothing_width,
        seed=seed,
    )


def dilate_fn(f: AnalyticFunction, lam: float) -> AnalyticFunction:
    """x -> f(lam x)."""
    if lam <= 0:
        raise SupportError(f"dilation factor must be positive, got {lam}")
    if lam == 1.0:
        return f
    return AnalyticFunction(kind=FunctionKind.DILATE, label=f"{f.label}@x{lam:g}", factor=lam, operands=(f,))


def translate_fn(f: AnalyticFunction, shift: float | Sequence[float]) -> AnalyticFunction:
    """x -> f(x - shift)."""
    vector = _as_center(shift)
    if not any(vector):
        return f
    text = ",".join(f"{s:g}" for s in vector)
    return AnalyticFunction(kind=FunctionKind.TRANSLATE, label=f"{f.label}+({text})", shift=vector, operands=(f,))


def product(*factors: AnalyticFunction) -> AnalyticFunction:
    return AnalyticFunction(
        kind=FunctionKind.PRODUCT, label="*".join(f.label for f in factors), operands=tuple(factors)
    )


def scalar(f: AnalyticFunction, c: float) -> AnalyticFunction:
    return AnalyticFunction(kind=FunctionKind.SCALAR, label=f"{c:g}*{f.label}", amplitude=c, operands=(f,))


def sum_fn(*terms: AnalyticFunction) -> AnalyticFunction:
    return AnalyticFunction(kind=FunctionKind.SUM, label="+".join(f.label for f in terms), operands=tuple(terms))


def relabel(f: AnalyticFunction, label: str) -> AnalyticFunction:
    return f.model_copy(update={"label": label})


# --- corpus ---


def build_corpus(config: CorpusConfig, *, kinds: Sequence[FunctionKind] | None = None) -> list[AnalyticFunction]:
    """Deterministic corpus: kinds cycle, parameters cycle within each kind."""
    chosen = list(kinds or config.kinds)
    corpus: list[AnalyticFunction] = []
    counters = {kind: 0 for kind in chosen}
    for i in range(config.size):
        kind = chosen[i % len(chosen)]
        k = counters[kind]
        counters[kind] += 1
        shift = config.shifts[k % len(config.shifts)]
        match kind:
            case FunctionKind.BUMP:
                f = bump(shift, config.bump_radii[k % len(config.bump_radii)])
            case FunctionKind.GAUSSIAN:
                f = gaussian(shift, config.sigmas[k % len(config.sigmas)])
            case FunctionKind.MOLLIFIED_NOISE:
                f = mollified_noise(config.seed + k, config.noise_support, config.noise_width, center=shift)
            case _:
                raise SupportError(f"corpus kind {kind.value} is not a test-function family")
        corpus.append(relabel(f, f"{kind.value}-{i:02d}"))
    return corpus


def audit_corpus_support(corpus: Sequence[AnalyticFunction], spec: Any) -> float:
    """Smallest distance between an (effective) support and the periodic seam; raises below the margin."""
    margin = SEAM_MARGIN_CELLS * spec.spacing
    worst = math.inf
    for f in corpus:
        reach = f.effective_radius()
        if not math.isfinite(reach):
            continue
        clearance = spec.extent / 2.0 - reach
        worst = min(worst, clearance)
        if clearance < margin:
            raise SupportError(
                f"{f.label} reaches {reach:g}, within {clearance:g} of the seam (need {margin:g} on L={spec.extent:g})"
            )
    return worst


def origin_cell_average(alpha: float, n: int, spacing: float, refinement: int = 4) -> float:
    """Mean of |x|^{-alpha} over the midpoints of a refinement^n subdivision of the origin cell."""
    sub = spacing / refinement
    ticks = -spacing / 2.0 + sub * (np.arange(refinement) + 0.5)
    mesh = np.meshgrid(*([ticks] * n), indexing="ij")
    r = np.sqrt(sum(m * m for m in mesh))
    return float(np.mean(r ** (-alpha)))
