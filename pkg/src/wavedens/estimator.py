"""Empirical wavelet coefficients, thresholding, and reconstruction.

The estimator is the classical thresholded wavelet series: scaling
coefficients at a coarse level j0, detail coefficients up to a level j1, with
detail coefficients shrunk by a hard or soft rule before synthesis on a grid.
Scaling coefficients are never thresholded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .wavelet_basis import WaveletTables

__all__ = [
    "Sample",
    "CoefficientLevel",
    "CoefficientSet",
    "ThresholdPlan",
    "DensityEstimate",
    "empirical_coefficients",
    "hard_threshold",
    "soft_threshold",
    "theoretical_plan",
    "apply_plan",
    "reconstruct",
]


@dataclass(frozen=True)
class Sample:
    """An ordered sample (time order is meaningful) on a known support."""

    values: np.ndarray
    support: tuple[float, float]

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        lo, hi = self.support
        if vals.size == 0:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(vals)):
            raise ValueError("sample contains non-finite values")
        if vals.min() < lo or vals.max() > hi:
            raise ValueError(
                f"sample values outside declared support [{lo}, {hi}]: "
                f"range [{vals.min()}, {vals.max()}]"
            )

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class CoefficientLevel:
    """Coefficients at one level: values[i] belongs to translate k_min + i."""

    j: int
    k_min: int
    values: np.ndarray
    killed: np.ndarray | None = None  # set by apply_plan

    def k_values(self) -> np.ndarray:
        return self.k_min + np.arange(len(self.values))


@dataclass(frozen=True)
class CoefficientSet:
    """Scaling coefficients at j0 plus detail levels j0..jmax.

    `details` is ordered by level; it may be empty for a pure scaling-level
    projection. Only translates whose support meets the sample support are
    stored.
    """

    j0: int
    scaling: CoefficientLevel
    details: tuple[CoefficientLevel, ...]
    n: int
    support: tuple[float, float]

    @property
    def jmax(self) -> int:
        return self.details[-1].j if self.details else self.j0 - 1

    def detail(self, j: int) -> CoefficientLevel:
        for lev in self.details:
            if lev.j == j:
                return lev
        raise KeyError(f"no detail level j={j}")

    def to_records(self) -> list[dict]:
        """Flat JSON-friendly records (kind, j, k, value, thresholded)."""
        recs = []
        for kind, levels in (("scaling", [self.scaling]), ("detail", self.details)):
            for lev in levels:
                killed = lev.killed if lev.killed is not None else np.zeros(len(lev.values), bool)
                for k, v, dead in zip(lev.k_values(), lev.values, killed):
                    recs.append(
                        {"kind": kind, "j": int(lev.j), "k": int(k),
                         "value": float(v), "thresholded": bool(dead)}
                    )
        return recs


@dataclass(frozen=True)
class ThresholdPlan:
    """Per-level thresholds and the highest retained detail level j1."""

    mode: str  # hard | soft | none
    lambdas: dict[int, float]
    j0: int
    j1: int

    def __post_init__(self):
        if self.mode not in ("hard", "soft", "none"):
            raise ValueError(f"threshold mode must be hard, soft or none, got {self.mode!r}")
        if self.j1 < self.j0:
            raise ValueError(f"plan has j1={self.j1} < j0={self.j0}")
        if any(lam < 0 for lam in self.lambdas.values()):
            raise ValueError("negative threshold in plan")


@dataclass(frozen=True)
class DensityEstimate:
    """A function tabulated on a uniform grid, with provenance in meta."""

    grid: np.ndarray
    values: np.ndarray
    meta: str

    def __post_init__(self):
        steps = np.diff(self.grid)
        if len(self.grid) < 2 or steps.min() <= 0:
            raise ValueError("grid must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            raise ValueError("grid must be uniform")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("estimate contains non-finite values")

    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.grid))


def _level_sums(tables: WaveletTables, kind: str, j: int, x: np.ndarray,
                k_min: int, k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Sums and squared sums of the raw table lookups per translate.

    Returns (S, Q) with S[i] = sum_t table(2^j x_t - k) and Q[i] the sum of
    squares, for k = k_min + i. The 2^(j/2) dilation factor is not applied.
    The lookup arithmetic mirrors WaveletTables.eval exactly so results agree
    with per-point evaluation to the last bit.
    """
    table = tables.phi_values if kind == "phi" else tables.psi_values
    N = tables.vanishing_moments
    size = k_max - k_min + 1
    S = np.zeros(size)
    Q = np.zeros(size)
    u = x * float(2**j)
    kbase = np.floor(u - N + 1).astype(np.int64)
    for t in range(2 * N):
        k = kbase + t
        idx = np.rint((u - k + (N - 1)) * 2**tables.depth)
        ok = (idx >= 0) & (idx < len(table)) & (k >= k_min) & (k <= k_max)
        w = table[idx[ok].astype(np.int64)]
        np.add.at(S, k[ok] - k_min, w)
        np.add.at(Q, k[ok] - k_min, w * w)
    return S, Q


def _synthesize_level(tables: WaveletTables, kind: str, lev: CoefficientLevel,
                      x: np.ndarray) -> np.ndarray:
    """sum_k c_k * (phi|psi)_{j,k}(x) for one coefficient level."""
    table = tables.phi_values if kind == "phi" else tables.psi_values
    N = tables.vanishing_moments
    k_max = lev.k_min + len(lev.values) - 1
    out = np.zeros(len(x))
    u = x * float(2**lev.j)
    kbase = np.floor(u - N + 1).astype(np.int64)
    for t in range(2 * N):
        k = kbase + t
        idx = np.rint((u - k + (N - 1)) * 2**tables.depth)
        ok = (idx >= 0) & (idx < len(table)) & (k >= lev.k_min) & (k <= k_max)
        out[ok] += lev.values[k[ok] - lev.k_min] * table[idx[ok].astype(np.int64)]
    return out * 2.0 ** (lev.j / 2)


def empirical_coefficients(sample: Sample, tables: WaveletTables,
                           j0: int, jmax: int) -> CoefficientSet:
    """Empirical coefficients n^-1 sum_i phi_{j,k}(X_i) (resp. psi).

    Detail levels run from j0 to jmax inclusive; jmax = j0 - 1 gives a pure
    scaling-level set.
    """
    if jmax < j0 - 1:
        raise ValueError(f"jmax={jmax} below j0-1 with j0={j0}")
    lo, hi = sample.support
    n = sample.n

    def level(kind: str, j: int) -> CoefficientLevel:
        k_min, k_max = tables.k_range(j, lo, hi)
        S, _ = _level_sums(tables, kind, j, sample.values, k_min, k_max)
        return CoefficientLevel(j=j, k_min=k_min, values=2.0 ** (j / 2) * S / n)

    return CoefficientSet(
        j0=j0,
        scaling=level("phi", j0),
        details=tuple(level("psi", j) for j in range(j0, jmax + 1)),
        n=n,
        support=sample.support,
    )


def hard_threshold(beta, lam):
    """beta if |beta| > lam else 0 (strict inequality)."""
    if lam < 0:
        raise ValueError("threshold must be nonnegative")
    b = np.asarray(beta, dtype=np.float64)
    out = np.where(np.abs(b) > lam, b, 0.0)
    return float(out) if b.ndim == 0 else out


def soft_threshold(beta, lam):
    """sign(beta) * max(|beta| - lam, 0)."""
    if lam < 0:
        raise ValueError("threshold must be nonnegative")
    b = np.asarray(beta, dtype=np.float64)
    out = np.sign(b) * np.maximum(np.abs(b) - lam, 0.0)
    return float(out) if b.ndim == 0 else out


def theoretical_plan(n: int, N: int, b: float, K: float = 1.0, mode: str = "hard",
                     j0_base: float = math.e, j1_base: float = 2.0) -> ThresholdPlan:
    """The theoretical schedule: j0, j1 and lambda_j = K sqrt(j/n).

    j0 is the smallest integer larger than log(n)/(1+N) and j1 the largest
    integer smaller than log(n * log(n)**(-2/b - 3)); the inner logarithm is
    natural, the outer bases default to e for j0 and 2 for j1 and can be
    changed for sensitivity checks. Small n (or small b) leaves no room
    between j0 and j1, which raises a degenerate-schedule error.
    """
    if n < 8:
        raise ValueError(f"n must be at least 8, got {n}")
    if N < 1 or b <= 0 or K <= 0:
        raise ValueError(f"need N >= 1, b > 0, K > 0, got N={N}, b={b}, K={K}")
    j0 = math.floor(math.log(n) / math.log(j0_base) / (1 + N)) + 1
    w = (math.log(n) + (-2.0 / b - 3.0) * math.log(math.log(n))) / math.log(j1_base)
    j1 = math.ceil(w) - 1
    if j1 < j0:
        raise ValueError(
            f"degenerate schedule: j1={j1} < j0={j0} for n={n}, b={b} (n too small)"
        )
    lambdas = {j: K * math.sqrt(j / n) for j in range(j0, j1 + 1)}
    return ThresholdPlan(mode=mode, lambdas=lambdas, j0=j0, j1=j1)


def apply_plan(coeffs: CoefficientSet, plan: ThresholdPlan) -> CoefficientSet:
    """Threshold detail levels j0..j1, zero levels above j1, keep scaling."""
    if plan.j1 > coeffs.jmax:
        raise ValueError(f"plan j1={plan.j1} exceeds stored levels (jmax={coeffs.jmax})")
    shrink = {"hard": hard_threshold, "soft": soft_threshold, "none": lambda b, lam: b}
    gamma = shrink[plan.mode]
    new_details = []
    for lev in coeffs.details:
        if lev.j > plan.j1:
            vals = np.zeros_like(lev.values)
        else:
            vals = gamma(lev.values, plan.lambdas.get(lev.j, 0.0))
        killed = (vals == 0.0)
        new_details.append(replace(lev, values=vals, killed=killed))
    return replace(coeffs, details=tuple(new_details))


def reconstruct(coeffs: CoefficientSet, tables: WaveletTables,
                grid_points: int = 4096, meta: str | None = None) -> DensityEstimate:
    """Synthesize the coefficient set on a uniform grid over its support."""
    if grid_points < 64:
        raise ValueError(f"grid_points must be at least 64, got {grid_points}")
    lo, hi = coeffs.support
    grid = np.linspace(lo, hi, grid_points)
    values = _synthesize_level(tables, "phi", coeffs.scaling, grid)
    for lev in coeffs.details:
        if np.any(lev.values != 0.0):
            values += _synthesize_level(tables, "psi", lev, grid)
    if meta is None:
        meta = f"wavelet j0={coeffs.j0} jmax={coeffs.jmax} n={coeffs.n}"
    return DensityEstimate(grid=grid, values=values, meta=meta)
