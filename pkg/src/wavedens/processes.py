"""Samplers for the dependence regimes sharing a common target marginal.

Four regimes: iid draws, the chaotic logistic map, a non-causal two-sided
moving average driven by coin flips, and the intermittent LSV map. The first
three are pushed through quantile transforms so their marginal law is a
chosen target density; the LSV map is returned raw because its invariant
density has no closed form.
"""

from __future__ import annotations

import hashlib
import math
import struct
import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.special import ndtr

from .estimator import Sample

__all__ = [
    "TargetDensity",
    "ProcessSpec",
    "build_target",
    "simulate",
    "lsv_step",
    "case3_marginal_cdf",
    "derived_seed",
]

_CASES = ("iid", "logistic_map", "noncausal_ar", "lsv")


@dataclass(frozen=True)
class TargetDensity:
    """A density with matching cdf and inverse cdf on a compact support."""

    kind: str
    params: dict
    support: tuple[float, float]
    density: Callable[[np.ndarray], np.ndarray]
    cdf: Callable[[np.ndarray], np.ndarray]
    inverse_cdf: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ProcessSpec:
    """Declarative description of one sampling regime."""

    case: str
    n: int
    seed: int
    target: TargetDensity | None = None
    lsv_alpha: float | None = None
    ar_depth: int = 200

    def __post_init__(self):
        if self.case not in _CASES:
            raise ValueError(f"unknown case {self.case!r}, expected one of {_CASES}")
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if self.case == "lsv":
            if self.lsv_alpha is None or not 0 < self.lsv_alpha < 1:
                raise ValueError("lsv case needs lsv_alpha in (0, 1)")
        elif self.target is None:
            raise ValueError(f"case {self.case!r} needs a target density")
        if self.ar_depth < 1:
            raise ValueError("ar_depth must be positive")


def derived_seed(master: int, r: int) -> int:
    """Replicate seed: first 8 bytes of SHA-256 over (master, r), little endian."""
    digest = hashlib.sha256(struct.pack("<QQ", master & (2**64 - 1), r)).digest()
    return int.from_bytes(digest[:8], "little")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(seed & (2**64 - 1))))


def _bisect_inverse(cdf, lo: float, hi: float, u: np.ndarray) -> np.ndarray:
    """Monotone bisection for cdf(x) = u, accurate to (hi-lo) * 2**-90."""
    u = np.asarray(u, dtype=np.float64)
    a = np.full(u.shape, lo)
    b = np.full(u.shape, hi)
    for _ in range(90):
        mid = 0.5 * (a + b)
        below = cdf(mid) < u
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
    return 0.5 * (a + b)


def build_target(kind: str, params: dict | None = None) -> TargetDensity:
    """Construct one of the built-in target densities (or a custom one).

    sine_uniform_mixture: c*(1 + sin(pi x)) on [0, 1/2), constant c on
    [1/2, 1], c = pi/(pi+1), so the density jumps at 1/2.
    gaussian_mixture: equal-weight normals at 0.35 and 0.65 (sd 0.1 each),
    truncated to [0, 1] and renormalized.
    custom: params must carry a `density` callable and `support`; the cdf is
    built by quadrature and the density is normalized to unit mass.
    """
    params = dict(params or {})
    if kind == "sine_uniform_mixture":
        c = math.pi / (math.pi + 1.0)

        def density(x):
            x = np.asarray(x, dtype=np.float64)
            return np.where(x < 0.5, c * (1.0 + np.sin(np.pi * x)), c) * (
                (x >= 0.0) & (x <= 1.0)
            )

        def cdf(x):
            x = np.asarray(x, dtype=np.float64)
            xc = np.clip(x, 0.0, 1.0)
            left = c * (xc + (1.0 - np.cos(np.pi * xc)) / np.pi)
            right = c * (xc + 1.0 / np.pi)
            return np.where(xc < 0.5, left, right)

        def inverse_cdf(u):
            u = np.asarray(u, dtype=np.float64)
            u_mid = cdf(np.asarray(0.5))
            linear = u / c - 1.0 / np.pi
            curved = _bisect_inverse(cdf, 0.0, 0.5, np.minimum(u, u_mid))
            return np.where(u >= u_mid, np.clip(linear, 0.0, 1.0), curved)

        return TargetDensity(kind, {"c": c}, (0.0, 1.0), density, cdf, inverse_cdf)

    if kind == "gaussian_mixture":
        means = np.asarray(params.get("means", (0.35, 0.65)), dtype=np.float64)
        sds = np.asarray(params.get("sds", (0.1, 0.1)), dtype=np.float64)
        weights = np.asarray(params.get("weights", (0.5, 0.5)), dtype=np.float64)
        lo, hi = params.get("support", (0.0, 1.0))
        if np.any(sds <= 0) or weights.sum() <= 0 or len(means) != len(sds):
            raise ValueError("gaussian_mixture parameters are not normalizable")
        weights = weights / weights.sum()

        def raw_cdf(x):
            x = np.asarray(x, dtype=np.float64)[..., None]
            return (weights * ndtr((x - means) / sds)).sum(axis=-1)

        mass = raw_cdf(hi) - raw_cdf(lo)
        if mass <= 0:
            raise ValueError("gaussian_mixture has no mass on the support")

        def density(x):
            x = np.asarray(x, dtype=np.float64)
            z = (x[..., None] - means) / sds
            pdf = (weights * np.exp(-0.5 * z * z) / (sds * math.sqrt(2 * math.pi))).sum(axis=-1)
            return np.where((x >= lo) & (x <= hi), pdf / mass, 0.0)

        def cdf(x):
            x = np.asarray(x, dtype=np.float64)
            return np.clip((raw_cdf(np.clip(x, lo, hi)) - raw_cdf(lo)) / mass, 0.0, 1.0)

        def inverse_cdf(u):
            return _bisect_inverse(cdf, lo, hi, u)

        pp = {"means": means.tolist(), "sds": sds.tolist(), "weights": weights.tolist()}
        return TargetDensity(kind, pp, (float(lo), float(hi)), density, cdf, inverse_cdf)

    if kind == "custom":
        if "density" not in params or "support" not in params:
            raise ValueError("custom target needs 'density' and 'support' params")
        raw = params["density"]
        lo, hi = params["support"]
        xs = np.linspace(lo, hi, 2**16 + 1)
        ys = np.asarray(raw(xs), dtype=np.float64)
        if np.any(ys < 0) or not np.all(np.isfinite(ys)):
            raise ValueError("custom density must be finite and nonnegative")
        cum = np.concatenate([[0.0], np.cumsum((ys[1:] + ys[:-1]) / 2 * np.diff(xs))])
        mass = cum[-1]
        if mass <= 0:
            raise ValueError("custom density has no mass")
        cum /= mass

        def density(x):
            return np.asarray(raw(np.asarray(x, dtype=np.float64))) / mass

        def cdf(x):
            return np.interp(np.asarray(x, dtype=np.float64), xs, cum)

        def inverse_cdf(u):
            return _bisect_inverse(cdf, lo, hi, u)

        return TargetDensity(kind, {"support": (lo, hi)}, (float(lo), float(hi)),
                             density, cdf, inverse_cdf)

    raise ValueError(f"unknown target kind {kind!r}")


def _logistic_trajectory(n: int, rng: np.random.Generator) -> np.ndarray:
    """Logistic-map orbit started from the invariant (arcsine) law."""
    u = rng.random()
    y = math.sin(math.pi * u / 2.0) ** 2
    out = np.empty(n)
    for i in range(n):
        if y == 0.0 or y == 0.75:
            y = math.nextafter(y, 0.5)
            warnings.warn("logistic trajectory hit a fixed point; perturbed by one ulp")
        out[i] = y
        y = 4.0 * y * (1.0 - y)
    return out


def _case3_noise(n: int, rng: np.random.Generator, depth: int) -> np.ndarray:
    """Coin flips on the lattice [-depth, n-1+depth], core drawn first.

    The core flips for sites 0..n-1 are drawn before the extension flips, so
    deepening the iteration extends the lattice without changing the
    realization near the centre.
    """
    xi = np.empty(n + 2 * depth)
    xi[depth:depth + n] = rng.integers(0, 2, size=n)
    ext = rng.integers(0, 2, size=2 * depth)
    xi[depth - 1::-1] = ext[0::2]
    xi[depth + n:] = ext[1::2]
    return xi


def _case3_lattice(n: int, rng: np.random.Generator, depth: int) -> np.ndarray:
    """Fixed-point iteration for Y = 2(Y_-1 + Y_+1)/5 + xi/5, started at 0.

    Each sweep trims one lattice site per side; after `depth` sweeps the
    remaining window is exactly the n core sites. The sweep contracts by 4/5,
    so depth 200 leaves an error below 2**-64.
    """
    xi = _case3_noise(n, rng, depth)
    y = np.zeros(n + 2 * depth)
    offset = 0
    for _ in range(depth):
        y = 0.4 * (y[:-2] + y[2:]) + 0.2 * xi[offset + 1:offset + len(y) - 1]
        offset += 1
    return y


def case3_marginal_cdf(y):
    """Closed-form cdf of (U + U' + xi0)/3 with uniform U, U' and a coin xi0."""
    y_arr = np.asarray(y, dtype=np.float64)

    def irwin_hall2(s):
        s = np.clip(s, 0.0, 2.0)
        return np.where(s <= 1.0, s * s / 2.0, 1.0 - (2.0 - s) ** 2 / 2.0)

    out = 0.5 * (irwin_hall2(3.0 * y_arr) + irwin_hall2(3.0 * y_arr - 1.0))
    return float(out) if np.isscalar(y) or y_arr.ndim == 0 else out


def lsv_step(x: float, alpha: float) -> float:
    """One step of the intermittent map: x(1 + 2^a x^a) on [0, 1/2], 2x-1 above."""
    if x <= 0.5:
        return x * (1.0 + (2.0 * x) ** alpha)
    return 2.0 * x - 1.0


def _lsv_trajectory(n: int, rng: np.random.Generator, alpha: float) -> np.ndarray:
    """Burn in for n steps from a uniform start, then record n values."""
    z = rng.random()
    out = np.empty(n)
    total = 2 * n
    for i in range(total):
        if z == 0.0 or z == 1.0:
            z = math.nextafter(z, 0.5)
            warnings.warn("lsv trajectory hit a boundary fixed point; perturbed by one ulp")
        z = lsv_step(z, alpha)
        if i >= n:
            out[i - n] = z
    return out


def simulate(spec: ProcessSpec) -> Sample:
    """Draw one sample from the regime; identical specs give identical output."""
    rng = _rng(spec.seed)
    if spec.case == "lsv":
        values = _lsv_trajectory(spec.n, rng, spec.lsv_alpha)
        return Sample(values, (0.0, 1.0))

    target = spec.target
    if spec.case == "iid":
        u = rng.random(spec.n)
    elif spec.case == "logistic_map":
        y = _logistic_trajectory(spec.n, rng)
        u = (2.0 / math.pi) * np.arcsin(np.sqrt(y))
    else:  # noncausal_ar
        y = _case3_lattice(spec.n, rng, spec.ar_depth)
        u = case3_marginal_cdf(y)
    values = target.inverse_cdf(u)
    return Sample(np.clip(values, *target.support), target.support)
