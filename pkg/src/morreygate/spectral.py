"""Complex powers of the Laplacian as Fourier multipliers on periodic grids.

Conventions: f^(xi) = int f(x) exp(-i x.xi) dx, approximated on the lattice by
F_k = h^n sum_j f(x_j) exp(-i x_j.xi_k). With x_j = -L/2 + j h this is
h^n (-1)^{k_1+...+k_n} fftn(f)_k, and the inverse is ifftn((-1)^k F) / h^n.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import fft, integrate, special

from morreygate.constants import FFT_WORKERS
from morreygate.errors import OracleError, RieszRangeError, ZeroModeError
from morreygate.grid import GridFunction, GridSpec, SpectrumFunction
from morreygate.models import ZeroModeRule
from morreygate.testfns import AnalyticFunction

logger = logging.getLogger(__name__)

# Mean-to-peak ratio of the spectrum below which skip-error accepts a negative power.
ZERO_MODE_TOLERANCE = 1e-12

ORACLE_TAIL_FRACTION = 1e-9
ORACLE_MAX_RADIUS_GROWTH = 40


class MultiplierPolicy(BaseModel):
    model_config = ConfigDict(frozen=True)

    zero_mode_rule: ZeroModeRule = ZeroModeRule.ZERO

    @property
    def description(self) -> str:
        return describe_zero_mode(self.zero_mode_rule)


DEFAULT_POLICY = MultiplierPolicy()


def describe_zero_mode(rule: ZeroModeRule) -> str:
    negative = (
        "set to 0 and the discarded mean recorded"
        if rule == ZeroModeRule.ZERO
        else "rejected unless the input mean is negligible"
    )
    return (
        f"|0|^z: z = 0 gives 1 (identity); Re z > 0 gives 0; Re z = 0, z != 0 gives 1 (unimodular extension); "
        f"Re z < 0 is {negative}"
    )


@lru_cache(maxsize=32)
def _alternating_sign(spec: GridSpec) -> np.ndarray:
    sign = np.ones(spec.shape)
    parity = 1.0 - 2.0 * (np.arange(spec.points_per_axis) % 2)
    for axis in range(spec.n_dims):
        shape = [1] * spec.n_dims
        shape[axis] = spec.points_per_axis
        sign = sign * parity.reshape(shape)
    sign.setflags(write=False)
    return sign


def forward_transform(f: GridFunction, *, workers: int = FFT_WORKERS) -> SpectrumFunction:
    spec = f.spec
    coeffs = spec.cell_volume * _alternating_sign(spec) * fft.fftn(f.values, workers=workers)
    return SpectrumFunction(spec, coeffs, f.provenance)


def inverse_transform(spectrum: SpectrumFunction, *, workers: int = FFT_WORKERS) -> GridFunction:
    spec = spectrum.spec
    values = fft.ifftn(_alternating_sign(spec) * spectrum.values, workers=workers) / spec.cell_volume
    return GridFunction(spec, values, spectrum.provenance)


def check_power(z: complex, n_dims: int) -> None:
    if z.real < 0 and -z.real >= n_dims:
        raise RieszRangeError(f"negative power needs -Re z < n; got z={z}, n={n_dims}")


def zero_mode_value(z: complex) -> float:
    """Multiplier value at xi = 0 before any policy for negative real parts is applied."""
    if z == 0 or z.real == 0:
        return 1.0
    return 0.0


def multiplier(spec: GridSpec, z: complex) -> np.ndarray:
    """|xi_k|^z on the frequency lattice, with the zero mode from zero_mode_value()."""
    modulus = spec.frequency_modulus()
    positive = modulus > 0
    logs = np.log(np.where(positive, modulus, 1.0))
    values = np.exp(complex(z) * logs)
    values[~positive] = zero_mode_value(complex(z))
    return values


def zero_mode_mean(f: GridFunction, *, workers: int = FFT_WORKERS) -> complex:
    """F_0 / L^n, the constant a vanishing zero mode removes from f."""
    spectrum = forward_transform(f, workers=workers)
    return complex(spectrum.values.flat[0]) / f.spec.extent**f.spec.n_dims


def laplacian_power(
    f: GridFunction,
    z: complex,
    policy: MultiplierPolicy = DEFAULT_POLICY,
    *,
    workers: int = FFT_WORKERS,
) -> GridFunction:
    """(-Delta)^{z/2} f: inverse transform of |xi|^z f^(xi)."""
    z = complex(z)
    if z == 0:
        return f.with_values(f.values, note="power z=0: identity")
    check_power(z, f.spec.n_dims)
    spectrum = forward_transform(f, workers=workers)
    note = f"power z={z:g}"
    if z.real < 0:
        coefficient = complex(spectrum.values.flat[0])
        mean = coefficient / f.spec.extent**f.spec.n_dims
        peak = float(np.max(np.abs(spectrum.values)))
        if policy.zero_mode_rule == ZeroModeRule.SKIP_ERROR and abs(coefficient) > ZERO_MODE_TOLERANCE * peak:
            raise ZeroModeError(f"negative power z={z:g} on input with non-zero mean {mean:g}")
        note += f"; zero mode dropped (mean {mean.real:.6g}{mean.imag:+.6g}j)"
    out = inverse_transform(spectrum.with_values(spectrum.values * multiplier(f.spec, z)), workers=workers)
    logger.debug("%s on %s", note, f.spec.to_dict())
    return out.with_values(out.values, note=note)


def compose_powers(
    f: GridFunction,
    z1: complex,
    z2: complex,
    policy: MultiplierPolicy = DEFAULT_POLICY,
    *,
    fused: bool = False,
    workers: int = FFT_WORKERS,
) -> GridFunction:
    """(-Delta)^{z2/2} (-Delta)^{z1/2} f.

    The two-step path applies each multiplier in turn, so each zero mode acts.
    The fused path applies |xi|^{z1+z2} once; when the sum is 0 its zero mode is 1.
    On the lattice the two agree wherever the zero modes do.
    """
    z1, z2 = complex(z1), complex(z2)
    check_power(z1, f.spec.n_dims)
    check_power(z2, f.spec.n_dims)
    if not fused:
        return laplacian_power(laplacian_power(f, z1, policy, workers=workers), z2, policy, workers=workers)
    total = z1 + z2
    if total == 0:
        spectrum = forward_transform(f, workers=workers)
        out = inverse_transform(spectrum, workers=workers)
        return out.with_values(out.values, note=f"fused powers {z1:g}{z2:+g}: multiplier 1")
    return laplacian_power(f, total, policy, workers=workers)


def parseval_residual(f: GridFunction, *, workers: int = FFT_WORKERS) -> float:
    """Relative gap between h^n sum|f|^2 and (2 pi)^{-n} (2 pi / L)^n sum|F|^2."""
    spec = f.spec
    spectrum = forward_transform(f, workers=workers)
    space = spec.cell_volume * float(np.sum(np.abs(f.values) ** 2))
    freq = (1.0 / spec.extent) ** spec.n_dims * float(np.sum(np.abs(spectrum.values) ** 2))
    return abs(space - freq) / space if space else abs(freq)


# --- majorants for sup |(-Delta)^{alpha v/2} f|, v in [0, 1] ---


def lebesgue_multiplier_bound(f: GridFunction, alpha: float, *, workers: int = FFT_WORKERS) -> float:
    """L^{-n} sum_k max(1, |xi_k|^alpha) |F_k|: exact upper bound on the lattice for every v in [0, 1]."""
    spec = f.spec
    spectrum = forward_transform(f, workers=workers)
    weight = np.maximum(1.0, spec.frequency_modulus() ** alpha)
    return float(np.sum(weight * np.abs(spectrum.values)) / spec.extent**spec.n_dims)


def smoothness_order(alpha: float, n_dims: int) -> int:
    """Smallest integer N with 2N > n + alpha."""
    return int(math.floor((n_dims + alpha) / 2.0)) + 1


def split_majorant(f: GridFunction, alpha: float, *, workers: int = FFT_WORKERS) -> dict[str, float]:
    """(2 pi)^{-n} [ ||f^||_inf w_n + ||(-Delta)^N f||_{L1} n w_n / (2N - alpha - n) ].

    Splits the frequency integral at |xi| = 1 and bounds the outer part through
    |f^(xi)| <= |xi|^{-2N} ||(-Delta)^N f||_{L1}.
    """
    spec = f.spec
    n = spec.n_dims
    order = smoothness_order(alpha, n)
    spectrum = forward_transform(f, workers=workers)
    peak = float(np.max(np.abs(spectrum.values)))
    smooth = laplacian_power(f, 2 * order, workers=workers)
    l1 = spec.cell_volume * float(np.sum(np.abs(smooth.values)))
    volume = unit_ball_volume(n)
    inner = peak * volume
    outer = l1 * n * volume / (2 * order - alpha - n)
    return {
        "order": float(order),
        "inner": inner / (2.0 * math.pi) ** n,
        "outer": outer / (2.0 * math.pi) ** n,
        "value": (inner + outer) / (2.0 * math.pi) ** n,
    }


def unit_ball_volume(n_dims: int) -> float:
    return math.pi ** (n_dims / 2.0) / math.gamma(n_dims / 2.0 + 1.0)


# --- quadrature oracle ---


def _angular_factor(n_dims: int, rho: float, r: float) -> float:
    t = rho * r
    match n_dims:
        case 1:
            return 2.0 * math.cos(t)
        case 2:
            return 2.0 * math.pi * float(special.j0(t))
        case 3:
            return 4.0 * math.pi * (math.sin(t) / t if t != 0.0 else 1.0)
        case _:
            raise OracleError(f"no radial oracle for n={n_dims}")


def _radial_integral(z: complex, n_dims: int, sigma: float, r: float, cutoff: float) -> complex:
    """int_0^cutoff rho^{z+n-1} exp(-sigma^2 rho^2/2) A_n(rho r) d rho with the algebraic factor as a weight."""
    power = z.real + n_dims - 1.0
    u = z.imag

    def integrand(rho: float, part: int) -> float:
        base = math.exp(-0.5 * (sigma * rho) ** 2) * _angular_factor(n_dims, rho, r)
        if u == 0.0:
            return base if part == 0 else 0.0
        phase = u * math.log(rho) if rho > 0 else 0.0
        return base * (math.cos(phase) if part == 0 else math.sin(phase))

    options = {"weight": "alg", "wvar": (power, 0.0), "epsabs": 1e-15, "epsrel": 1e-12, "limit": 500}
    re, _ = integrate.quad(integrand, 0.0, cutoff, args=(0,), **options)
    im = 0.0
    if u != 0.0:
        im, _ = integrate.quad(integrand, 0.0, cutoff, args=(1,), **options)
    return complex(re, im)


def _tail_bound(z: complex, n_dims: int, sigma: float, cutoff: float) -> float:
    """Bound on int_cutoff^inf rho^{Re z+n-1} exp(-sigma^2 rho^2/2) times the angular maximum."""
    a = (z.real + n_dims) / 2.0
    scale = 0.5 * (2.0 / sigma**2) ** a
    tail = scale * float(special.gamma(a)) * float(special.gammaincc(a, 0.5 * (sigma * cutoff) ** 2))
    return tail * _angular_factor(n_dims, 0.0, 0.0)


def quadrature_oracle(f: AnalyticFunction, z: complex, points: Sequence[Sequence[float]]) -> list[complex]:
    """(2 pi)^{-n} int |xi|^z f^(xi) exp(i x.xi) d xi at each point, by adaptive radial quadrature.

    Works on the Gaussian decomposition of f; the truncation radius grows until the
    tail bound falls below ORACLE_TAIL_FRACTION of the largest returned value.
    """
    z = complex(z)
    terms = f.gaussian_terms()
    if not points:
        return []
    n = len(points[0])
    if z.real <= -n:
        raise OracleError(f"oracle needs Re z > -n, got z={z}, n={n}")
    sigma_min = min(t.sigma for t in terms)
    cutoff = 8.0 / sigma_min
    for _ in range(ORACLE_MAX_RADIUS_GROWTH):
        values = []
        tail = 0.0
        for x in points:
            total = 0j
            for term in terms:
                c = np.asarray(term.center[:n] + (0.0,) * max(0, n - len(term.center)))
                r = float(np.linalg.norm(np.asarray(x, dtype=float) - c))
                prefactor = term.amplitude * (2.0 * math.pi * term.sigma**2) ** (n / 2.0) / (2.0 * math.pi) ** n
                total += prefactor * _radial_integral(z, n, term.sigma, r, cutoff)
            values.append(total)
        for term in terms:
            prefactor = abs(term.amplitude) * (2.0 * math.pi * term.sigma**2) ** (n / 2.0) / (2.0 * math.pi) ** n
            tail += prefactor * _tail_bound(z, n, term.sigma, cutoff)
        scale = max(abs(v) for v in values)
        if tail <= ORACLE_TAIL_FRACTION * scale:
            logger.debug("oracle z=%s converged at cutoff %.3g (tail %.3g)", z, cutoff, tail)
            return values
        cutoff *= 1.5
    raise OracleError(f"tail bound not achievable for z={z}: {tail:.3g} vs values of size {scale:.3g}")
