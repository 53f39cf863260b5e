"""Distances, Monte-Carlo risk aggregation, and the covariance-decay diagnostic."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .cross_validation import CvSelection
from .estimator import DensityEstimate, Sample
from .processes import ProcessSpec, TargetDensity, derived_seed, simulate
from .wavelet_basis import WaveletTables

__all__ = [
    "RiskReport",
    "DecayProfile",
    "lp_distance",
    "monte_carlo_risk",
    "integrated_moments",
    "covariance_decay",
]

# A fit maps a sample to (estimate, selection or None, per-level killed
# fraction or None); kernel methods return (estimate, None, None).
FitFunction = Callable[[Sample], tuple[DensityEstimate, CvSelection | None, dict | None]]


@dataclass(frozen=True)
class RiskReport:
    """Monte-Carlo risk summary for one method on one sampling regime."""

    method: str
    case: str
    n: int
    replicates: int
    mise: float | None
    lp_risks: dict[float, float]
    mean_j1: float | None = None
    threshold_profile: dict[int, float] | None = None
    thresholded_fraction: dict[int, float] | None = None
    integrated_moments: dict[int, float] | None = None
    moment_clamps: int = 0

    def __post_init__(self):
        if self.mise is not None and self.mise < 0:
            raise ValueError("negative mise")
        if any(v < 0 for v in self.lp_risks.values()):
            raise ValueError("negative lp risk")
        if self.thresholded_fraction is not None and any(
            not 0.0 <= v <= 1.0 for v in self.thresholded_fraction.values()
        ):
            raise ValueError("thresholded fraction outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "case": self.case,
            "n": self.n,
            "replicates": self.replicates,
            "mise": self.mise,
            "lp_risks": {str(p): v for p, v in sorted(self.lp_risks.items())},
            "mean_j1": self.mean_j1,
            "threshold_profile": _str_keys(self.threshold_profile),
            "thresholded_fraction": _str_keys(self.thresholded_fraction),
            "integrated_moments": _str_keys(self.integrated_moments),
            "moment_clamps": self.moment_clamps,
        }


def _str_keys(d: dict | None) -> dict | None:
    return None if d is None else {str(k): d[k] for k in sorted(d)}


@dataclass(frozen=True)
class DecayProfile:
    """Empirical autocovariance of a probe function along the sample path."""

    j: int
    k: int
    lags: np.ndarray
    covariances: np.ndarray
    variance: float
    floor: np.ndarray
    slope: float | None
    intercept: float | None
    sub_noise: bool

    def __post_init__(self):
        lags = np.asarray(self.lags)
        if lags.size == 0 or lags[0] < 1 or np.any(np.diff(lags) <= 0):
            raise ValueError("lags must be strictly increasing and >= 1")


def lp_distance(estimate: DensityEstimate, truth: TargetDensity, p: float) -> float:
    """(integral |g - f|^p)^(1/p) by trapezoid quadrature on the estimate grid."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    lo, hi = truth.support
    grid = estimate.grid
    if grid[0] > lo or grid[-1] < hi:
        raise ValueError(
            f"estimate grid [{grid[0]}, {grid[-1]}] does not cover the "
            f"target support [{lo}, {hi}]"
        )
    diff = np.abs(estimate.values - truth.density(grid))
    return float(np.trapezoid(diff**p, grid) ** (1.0 / p))


def integrated_moments(estimates: Sequence[DensityEstimate], k: int,
                       interval: tuple[float, float] = (0.01, 1.0)) -> tuple[float, int]:
    """integral over the interval of (mean across replicates of g^k)^(1/k).

    Returns (value, clamp_count). For odd k >= 3 the pointwise mean of g^k can
    dip below zero (wavelet estimates are not nonnegative); those points are
    clamped to 0 before the k-th root and counted. k = 1 integrates the
    signed pointwise mean directly and is never clamped.
    """
    if k < 1:
        raise ValueError(f"moment order must be >= 1, got {k}")
    if not estimates:
        raise ValueError("need at least one estimate")
    grid = estimates[0].grid
    for est in estimates[1:]:
        if not np.array_equal(est.grid, grid):
            raise ValueError("estimates must share a common grid")
    a, b = interval
    if a >= b or grid[0] > a or grid[-1] < b:
        raise ValueError(f"grid does not cover the moment interval [{a}, {b}]")
    stack = np.stack([est.values for est in estimates])
    moment = (stack**k).mean(axis=0)

    inside = (grid > a) & (grid < b)
    xs = np.concatenate([[a], grid[inside], [b]])
    ys = np.concatenate([
        [np.interp(a, grid, moment)], moment[inside], [np.interp(b, grid, moment)]
    ])
    clamps = 0
    if k == 1:
        integrand = ys
    elif k % 2 == 1:
        clamps = int((ys < 0).sum())
        integrand = np.maximum(ys, 0.0) ** (1.0 / k)
    else:
        integrand = np.abs(ys) ** (1.0 / k)
    return float(np.trapezoid(integrand, xs)), clamps


def monte_carlo_risk(spec: ProcessSpec, fit: FitFunction, M: int,
                     p_list: Sequence[float] = (2.0,), method: str = "",
                     truth: TargetDensity | None = None,
                     moment_orders: Sequence[int] = (),
                     moment_interval: tuple[float, float] = (0.01, 1.0),
                     threads: int = 1,
                     seed_fn: Callable[[int, int], int] = derived_seed) -> RiskReport:
    """Simulate M replicates, fit each, and aggregate risks.

    Replicate r uses seed_fn(spec.seed, r); replicates may run on a thread
    pool but are always folded in replicate order, so the report does not
    depend on scheduling. The truth defaults to spec.target; pass truth=None
    explicitly for regimes without a known density (risks are then skipped
    and only selection statistics and moments are reported).
    """
    if M < 2:
        raise ValueError(f"need M >= 2 replicates, got M={M}")
    if truth is None and spec.case != "lsv":
        truth = spec.target
    norms = sorted(set(p_list) | {2.0}) if truth is not None else []

    def one(r: int) -> tuple:
        seed = seed_fn(spec.seed, r)
        try:
            sample = simulate(replace(spec, seed=seed))
            estimate, selection, kill_fraction = fit(sample)
            dists = {p: lp_distance(estimate, truth, p) for p in norms}
            return estimate, selection, kill_fraction, dists
        except Exception as exc:
            raise RuntimeError(f"replicate {r} (seed {seed}) failed: {exc}") from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(M)))
    else:
        results = [one(r) for r in range(M)]

    estimates = [res[0] for res in results]
    selections = [res[1] for res in results]
    fractions = [res[2] for res in results]
    mise = None
    lp_risks: dict[float, float] = {}
    if truth is not None:
        mise = float(np.mean([res[3][2.0] ** 2 for res in results]))
        lp_risks = {
            p: float(np.mean([res[3][p] ** p for res in results]) ** (1.0 / p))
            for p in p_list
        }

    mean_j1 = None
    threshold_profile = None
    if all(sel is not None for sel in selections):
        mean_j1 = float(np.mean([sel.j1_hat for sel in selections]))
        levels = sorted(selections[0].lambdas)
        threshold_profile = {
            j: float(np.mean([sel.lambdas[j] for sel in selections])) for j in levels
        }
    thresholded_fraction = None
    if all(fr is not None for fr in fractions):
        levels = sorted(fractions[0])
        thresholded_fraction = {
            j: float(np.mean([fr[j] for fr in fractions])) for j in levels
        }

    moments = None
    clamps = 0
    if moment_orders:
        moments = {}
        for k in moment_orders:
            value, c = integrated_moments(estimates, k, moment_interval)
            moments[k] = value
            clamps += c

    return RiskReport(
        method=method,
        case=spec.case,
        n=spec.n,
        replicates=M,
        mise=mise,
        lp_risks=lp_risks,
        mean_j1=mean_j1,
        threshold_profile=threshold_profile,
        thresholded_fraction=thresholded_fraction,
        integrated_moments=moments,
        moment_clamps=clamps,
    )


def covariance_decay(sample: Sample, tables: WaveletTables, j: int, k: int,
                     max_lag: int, kind: str = "phi") -> DecayProfile:
    """Autocovariance of delta(X_i) = (phi|psi)_{j,k}(X_i) over lags 1..max_lag.

    c_hat(r) = (n-r)^-1 sum_i delta~(X_i) delta~(X_{i+r}) with delta~ centered
    by the sample mean. The per-lag noise floor is three standard errors of
    the lag products; the log-log slope is fitted over lags in [5, max_lag]
    whose |c_hat| clears the floor. Fewer than 3 usable lags leaves the slope
    absent; when at most 5% of all lags clear the floor the profile is
    flagged sub_noise (covariances indistinguishable from an iid sequence).
    """
    n = sample.n
    if not 1 <= max_lag <= n // 4:
        raise ValueError(f"max_lag must be in [1, n/4], got {max_lag} with n={n}")
    delta = tables.eval(kind, j, k, sample.values)
    delta = delta - delta.mean()
    variance = float(np.mean(delta * delta))

    lags = np.arange(1, max_lag + 1)
    covs = np.empty(max_lag)
    floor = np.empty(max_lag)
    for i, r in enumerate(lags):
        prods = delta[:-r] * delta[r:]
        covs[i] = prods.mean()
        floor[i] = 3.0 * prods.std() / math.sqrt(n - r)

    above = np.abs(covs) > floor
    sub_noise = above.mean() <= 0.05
    fit_mask = above & (lags >= 5)
    slope = intercept = None
    if fit_mask.sum() >= 3:
        coef = np.polyfit(np.log(lags[fit_mask]), np.log(np.abs(covs[fit_mask])), 1)
        slope, intercept = float(coef[0]), float(coef[1])
    return DecayProfile(
        j=j, k=k, lags=lags, covariances=covs, variance=variance,
        floor=floor, slope=slope, intercept=intercept, sub_noise=sub_noise,
    )
