"""Uniform periodic grids on [-L/2, L/2)^n and the sampled functions that live on them."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from morreygate.errors import GridError, SpecMismatchError, SupportError
from morreygate.fs import write_csv

if TYPE_CHECKING:
    from morreygate.testfns import AnalyticFunction

logger = logging.getLogger(__name__)

SUPPORTED_DIMENSIONS = (1, 2, 3)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class GridSpec:
    n_dims: int
    extent: float
    points_per_axis: int

    def __post_init__(self) -> None:
        if self.n_dims not in SUPPORTED_DIMENSIONS:
            raise GridError(f"unsupported dimension n={self.n_dims}; expected one of {SUPPORTED_DIMENSIONS}")
        if not self.extent > 0 or not np.isfinite(self.extent):
            raise GridError(f"extent must be a positive finite length, got {self.extent}")
        if self.points_per_axis < 4 or self.points_per_axis % 2:
            raise GridError(f"points_per_axis must be even and >= 4, got {self.points_per_axis}")
        if self.spacing * self.points_per_axis != self.extent:
            raise GridError(f"h * N != L in floating point for L={self.extent}, N={self.points_per_axis}")

    @property
    def spacing(self) -> float:
        return self.extent / self.points_per_axis

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.n_dims

    @property
    def size(self) -> int:
        return self.points_per_axis**self.n_dims

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.n_dims

    @property
    def frequency_spacing(self) -> float:
        return 2.0 * np.pi / self.extent

    def axis(self) -> np.ndarray:
        """Lattice coordinates along one axis: x_j = -L/2 + j h."""
        return -self.extent / 2.0 + self.spacing * np.arange(self.points_per_axis)

    def frequency_axis(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.points_per_axis, d=self.spacing)

    @cached_property
    def _coordinates(self) -> tuple[np.ndarray, ...]:
        axes = [self.axis()] * self.n_dims
        return tuple(_frozen(c) for c in np.meshgrid(*axes, indexing="ij"))

    @cached_property
    def _frequencies(self) -> tuple[np.ndarray, ...]:
        axes = [self.frequency_axis()] * self.n_dims
        return tuple(_frozen(k) for k in np.meshgrid(*axes, indexing="ij"))

    @cached_property
    def _radius(self) -> np.ndarray:
        return _frozen(np.sqrt(sum(c * c for c in self._coordinates)))

    @cached_property
    def _frequency_modulus(self) -> np.ndarray:
        return _frozen(np.sqrt(sum(k * k for k in self._frequencies)))

    def coordinates(self) -> tuple[np.ndarray, ...]:
        return self._coordinates

    def frequencies(self) -> tuple[np.ndarray, ...]:
        return self._frequencies

    def radius(self) -> np.ndarray:
        return self._radius

    def frequency_modulus(self) -> np.ndarray:
        return self._frequency_modulus

    def origin_index(self) -> tuple[int, ...]:
        return (self.points_per_axis // 2,) * self.n_dims

    def refined(self) -> GridSpec:
        """Half the spacing on a box twice as wide."""
        return GridSpec(self.n_dims, 2.0 * self.extent, 4 * self.points_per_axis)

    def with_extent(self, extent: float) -> GridSpec:
        """Same spacing on a box of another size."""
        points = round(extent / self.spacing)
        return GridSpec(self.n_dims, extent, points + points % 2)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_dims": self.n_dims,
            "extent": self.extent,
            "points_per_axis": self.points_per_axis,
            "spacing": self.spacing,
        }


def build_grid(n_dims: int, extent: float, points_per_axis: int) -> GridSpec:
    return GridSpec(int(n_dims), float(extent), int(points_per_axis))


@dataclass(frozen=True, eq=False)
class _Sampled:
    spec: GridSpec
    values: np.ndarray
    provenance: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.complex128, copy=True)
        if values.size != self.spec.size:
            raise GridError(f"expected {self.spec.size} samples for {self.spec.shape}, got {values.size}")
        values = values.reshape(self.spec.shape)
        if not np.all(np.isfinite(values)):
            raise GridError(f"{type(self).__name__} holds non-finite values")
        object.__setattr__(self, "values", _frozen(values))

    def _check_spec(self, other: _Sampled) -> None:
        if other.spec != self.spec:
            raise SpecMismatchError(f"grid mismatch: {self.spec} vs {other.spec}")


@dataclass(frozen=True, eq=False)
class GridFunction(_Sampled):
    def abs(self) -> np.ndarray:
        return np.abs(self.values)

    def with_values(self, values: np.ndarray, note: str | None = None) -> GridFunction:
        provenance = self.provenance + ((note,) if note else ())
        return GridFunction(self.spec, values, provenance)

    def scale(self, factor: complex) -> GridFunction:
        return self.with_values(factor * self.values)

    def shifted(self, cells: tuple[int, ...]) -> GridFunction:
        """Periodic shift by whole lattice vectors."""
        axes = tuple(range(self.spec.n_dims))
        return self.with_values(np.roll(self.values, cells, axis=axes))

    def dump_csv(self, path: Path) -> None:
        spec = self.spec
        coords = [c.ravel() for c in spec.coordinates()]
        flat = self.values.ravel()
        header = ["index", *[f"x{i + 1}" for i in range(spec.n_dims)], "re", "im"]
        rows = [
            [j, *[float(c[j]) for c in coords], float(flat[j].real), float(flat[j].imag)] for j in range(flat.size)
        ]
        write_csv(path, header, rows)


@dataclass(frozen=True, eq=False)
class SpectrumFunction(_Sampled):
    def with_values(self, values: np.ndarray, note: str | None = None) -> SpectrumFunction:
        provenance = self.provenance + ((note,) if note else ())
        return SpectrumFunction(self.spec, values, provenance)


def sample(f: AnalyticFunction, spec: GridSpec) -> GridFunction:
    radius = f.support_radius()
    if radius is not None and radius >= spec.extent / 2.0:
        raise SupportError(f"support radius {radius:g} of {f.label} leaves the box [-{spec.extent / 2:g}, ...)")
    values = f.evaluate(spec.coordinates(), spacing=spec.spacing)
    logger.debug("sampled %s on n=%d N=%d", f.label, spec.n_dims, spec.points_per_axis)
    return GridFunction(spec, values, (f"sample:{f.label}", *f.evaluation_notes()))


def pointwise_multiply(f: GridFunction, g: GridFunction) -> GridFunction:
    f._check_spec(g)
    return GridFunction(f.spec, f.values * g.values, f.provenance + g.provenance)
