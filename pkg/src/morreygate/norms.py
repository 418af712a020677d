"""Discrete Morrey, Lebesgue and weak-Lebesgue functionals.

The Morrey norm is a maximum over a finite ball family, so it is a lower bound
of the continuum supremum. Ball volumes use the continuum formula w_n r^n while
ball integrals are lattice sums; balls are clipped at the box and never wrap.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import signal

from morreygate.constants import BALL_OFFSET, BALL_RATIO
from morreygate.errors import EmptyBallError, ExponentError, SpecMismatchError
from morreygate.grid import GridFunction, GridSpec
from morreygate.spectral import unit_ball_volume

logger = logging.getLogger(__name__)


def default_stride(n_dims: int) -> int:
    return 2 if n_dims == 3 else 1


@dataclass(frozen=True)
class BallFamily:
    spec: GridSpec
    stride: int
    radii: tuple[float, ...]
    ratio: float = BALL_RATIO
    offset: float = BALL_OFFSET

    def center_axis_indices(self) -> np.ndarray:
        """Per-axis indices of centers: every stride-th point, aligned so the origin is a center."""
        origin = self.spec.points_per_axis // 2
        idx = np.arange(self.spec.points_per_axis)
        return idx[(idx - origin) % self.stride == 0]

    def center_count(self) -> int:
        return len(self.center_axis_indices()) ** self.spec.n_dims

    def describe(self) -> dict[str, Any]:
        return {
            "stride": self.stride,
            "ratio": self.ratio,
            "offset_cells": self.offset,
            "radius_count": len(self.radii),
            "min_radius": self.radii[0],
            "max_radius": self.radii[-1],
            "center_count": self.center_count(),
        }


def ball_family(
    spec: GridSpec,
    *,
    stride: int | None = None,
    ratio: float = BALL_RATIO,
    offset: float = BALL_OFFSET,
) -> BallFamily:
    """Radii r_m = h (1 + offset) ratio^m, up to the first radius reaching the box diameter sqrt(n) L."""
    if ratio <= 1.0:
        raise ValueError(f"ball ratio must exceed 1, got {ratio}")
    h = spec.spacing
    diameter = math.sqrt(spec.n_dims) * spec.extent
    radii: list[float] = []
    m = 0
    while True:
        r = h * (1.0 + offset) * ratio**m
        radii.append(r)
        if r >= diameter:
            break
        m += 1
    return BallFamily(
        spec=spec,
        stride=stride or default_stride(spec.n_dims),
        radii=tuple(radii),
        ratio=ratio,
        offset=offset,
    )


@dataclass(frozen=True)
class NormResult:
    value: float
    witness_center: tuple[float, ...] | None = None
    witness_radius: float | None = None
    center_index: int | None = None
    radius_index: int | None = None

    def as_row(self, function_id: str, p: float, q: float) -> list[Any]:
        center = "" if self.witness_center is None else " ".join(f"{c:.10g}" for c in self.witness_center)
        radius = "" if self.witness_radius is None else self.witness_radius
        return [function_id, p, q, self.value, center, radius]


NORM_ROW_HEADER = ["function_id", "p", "q", "value", "witness_center", "witness_radius"]


def _check_exponent(p: float, name: str = "p") -> None:
    if not p >= 1:
        raise ExponentError(f"{name} must be >= 1, got {p}")


def lebesgue_norm(f: GridFunction, p: float) -> float:
    _check_exponent(p)
    magnitude = f.abs()
    if math.isinf(p):
        return float(np.max(magnitude))
    return float((f.spec.cell_volume * np.sum(magnitude**p)) ** (1.0 / p))


def weak_norm(f: GridFunction, t: float) -> float:
    """sup_lambda lambda (h^n #{|f| >= lambda})^{1/t}, scanning lambda over the sample magnitudes."""
    _check_exponent(t, "t")
    levels = np.sort(f.abs().ravel())[::-1]
    counts = np.arange(1, levels.size + 1, dtype=float)
    return float(np.max(levels * (f.spec.cell_volume * counts) ** (1.0 / t)))


def _ball_mask(spec: GridSpec, center: Sequence[float], radius: float) -> np.ndarray:
    r2 = sum((c - x0) ** 2 for c, x0 in zip(spec.coordinates(), center))
    return r2 < radius * radius


def ball_local_norm(f: GridFunction, p: float, center: Sequence[float], radius: float) -> float:
    """(h^n sum_{|x_j - a| < r} |f(x_j)|^p)^{1/p}; p = inf gives the maximum over the ball."""
    _check_exponent(p)
    if radius < f.spec.spacing:
        raise EmptyBallError(f"radius {radius:g} is below the lattice spacing {f.spec.spacing:g}")
    mask = _ball_mask(f.spec, center, radius)
    if not np.any(mask):
        raise EmptyBallError(f"ball at {tuple(center)} of radius {radius:g} holds no lattice point")
    magnitude = f.abs()[mask]
    if math.isinf(p):
        return float(np.max(magnitude))
    return float((f.spec.cell_volume * np.sum(magnitude**p)) ** (1.0 / p))


def _ball_kernel(spec: GridSpec, radius: float) -> np.ndarray:
    half = min(int(math.ceil(radius / spec.spacing)), spec.points_per_axis - 1)
    ticks = spec.spacing * np.arange(-half, half + 1)
    mesh = np.meshgrid(*([ticks] * spec.n_dims), indexing="ij")
    return (sum(m * m for m in mesh) < radius * radius).astype(float)


def ball_sums(power: np.ndarray, spec: GridSpec, radius: float) -> np.ndarray:
    """sum_{|x_j - x_i| < r} power_j for every lattice point x_i, clipped at the box."""
    covering = math.sqrt(spec.n_dims) * (spec.points_per_axis - 1) * spec.spacing
    if radius > covering:
        return np.full(power.shape, float(np.sum(power)))
    if spec.n_dims == 1:
        return _window_sums(power, spec, radius)
    sums = signal.fftconvolve(power, _ball_kernel(spec, radius), mode="same")
    return np.clip(sums, 0.0, None)


def _window_sums(power: np.ndarray, spec: GridSpec, radius: float) -> np.ndarray:
    """Line ball sums from a running total; the window holds offsets k with (k h)^2 < r^2, as _ball_kernel."""
    half = min(int(math.ceil(radius / spec.spacing)), spec.points_per_axis - 1)
    reach = int(np.count_nonzero((spec.spacing * np.arange(half + 1)) ** 2 < radius * radius)) - 1
    total = np.concatenate(([0.0], np.cumsum(power)))
    index = np.arange(spec.points_per_axis)
    upper = np.minimum(index + reach + 1, spec.points_per_axis)
    lower = np.maximum(index - reach, 0)
    return np.clip(total[upper] - total[lower], 0.0, None)


def morrey_objective(f: GridFunction, p: float, q: float, family: BallFamily) -> np.ndarray:
    """|B|^{1/q - 1/p} ||f||_{L^p(B)} for every (center, radius) of the family, shape (centers, radii)."""
    if family.spec != f.spec:
        raise SpecMismatchError("ball family was built for another grid")
    _check_exponent(p)
    if not p <= q < math.inf:
        raise ExponentError(f"Morrey norm needs 1 <= p <= q < inf, got p={p}, q={q}")
    spec = f.spec
    power = f.abs() ** p
    axis_idx = family.center_axis_indices()
    selector = np.ix_(*([axis_idx] * spec.n_dims))
    omega = unit_ball_volume(spec.n_dims)
    exponent = 1.0 / q - 1.0 / p
    columns = []
    for r in family.radii:
        sums = ball_sums(power, spec, r)[selector].ravel()
        local = (spec.cell_volume * sums) ** (1.0 / p)
        columns.append((omega * r**spec.n_dims) ** exponent * local)
    return np.stack(columns, axis=1)


def morrey_norm(f: GridFunction, p: float, q: float, family: BallFamily) -> NormResult:
    objective = morrey_objective(f, p, q, family)
    flat = int(np.argmax(objective))
    center_index, radius_index = divmod(flat, objective.shape[1])
    axis_idx = family.center_axis_indices()
    multi = np.unravel_index(center_index, (len(axis_idx),) * f.spec.n_dims)
    axis = f.spec.axis()
    witness = tuple(float(axis[axis_idx[i]]) for i in multi)
    return NormResult(
        value=float(objective[center_index, radius_index]),
        witness_center=witness,
        witness_radius=family.radii[radius_index],
        center_index=center_index,
        radius_index=radius_index,
    )


def radial_profile_at_origin(f: GridFunction, p: float, q: float, family: BallFamily) -> np.ndarray:
    """Objective values at the origin center across the radius ladder."""
    objective = morrey_objective(f, p, q, family)
    axis_idx = family.center_axis_indices()
    origin = int(np.searchsorted(axis_idx, f.spec.points_per_axis // 2))
    flat = np.ravel_multi_index((origin,) * f.spec.n_dims, (len(axis_idx),) * f.spec.n_dims)
    return objective[int(flat)]
