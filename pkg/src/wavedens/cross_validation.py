"""Cross-validated threshold and resolution selection (HTCV / STCV).

Both criteria score a level's surviving coefficients by an unbiased risk
proxy: the squared empirical coefficient minus twice the mean over ordered
pairs of psi_{j,k}(X_i) psi_{j,k}(X_h). The soft variant adds lambda^2 per
survivor. Thresholds are chosen by exact minimization over the finite set of
values the criterion can distinguish, and the top resolution j1 is the start
of the all-zero tail of per-level minima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimator import (
    CoefficientLevel,
    CoefficientSet,
    DensityEstimate,
    Sample,
    ThresholdPlan,
    _level_sums,
    apply_plan,
    reconstruct,
)
from .wavelet_basis import WaveletTables

__all__ = [
    "CvCriterionValue",
    "CvSelection",
    "cv_criterion",
    "select_lambda",
    "select_j1",
    "fit_cv",
]

_MODES = ("HTCV", "STCV")
_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class CvCriterionValue:
    """The criterion value CV_j(lam) at one level and threshold."""

    j: int
    lam: float
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"criterion value at j={self.j} is not finite")
        if self.lam < 0:
            raise ValueError(f"negative threshold {self.lam}")


@dataclass(frozen=True)
class CvSelection:
    """Selected thresholds and resolution for one sample and mode.

    `lambdas` maps every level j0 <= j <= j_star to its minimizer; levels
    above j1_hat are dropped from the estimate but their selections are kept
    for diagnostics. `criterion_values` holds CV_j at the selected threshold.
    """

    mode: str
    j0: int
    j_star: int
    j1_hat: int
    lambdas: dict[int, float]
    criterion_values: tuple[CvCriterionValue, ...]

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if not self.j0 <= self.j1_hat <= self.j_star:
            raise ValueError(
                f"need j0 <= j1_hat <= j_star, got {self.j0}, {self.j1_hat}, {self.j_star}"
            )
        expected = set(range(self.j0, self.j_star + 1))
        if set(self.lambdas) != expected or {cv.j for cv in self.criterion_values} != expected:
            raise ValueError("selection must cover exactly the levels j0..j_star")
        if any(lam < 0 for lam in self.lambdas.values()):
            raise ValueError("negative threshold in selection")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "j0": self.j0,
            "j_star": self.j_star,
            "j1_hat": self.j1_hat,
            "levels": [
                {"j": cv.j, "lambda": cv.lam, "cv": cv.value}
                for cv in sorted(self.criterion_values, key=lambda c: c.j)
            ],
        }


def _level_stats(sample: Sample, tables: WaveletTables, j: int):
    """Per-translate ingredients of the criterion at one detail level.

    Returns (k_min, beta, bracket) where beta[k] is the empirical coefficient
    and bracket[k] = beta^2 - 2 (S^2 - Q) / (n (n-1)) is the survivor's
    contribution to the hard criterion, with S and Q the plain and squared
    sums of psi_{j,k} over the sample.
    """
    n = sample.n
    if n < 2:
        raise ValueError(f"the pairwise term needs n >= 2, got n={n}")
    lo, hi = sample.support
    k_min, k_max = tables.k_range(j, lo, hi)
    S, Q = _level_sums(tables, "psi", j, sample.values, k_min, k_max)
    S = S * 2.0 ** (j / 2)
    Q = Q * 2.0**j
    beta = S / n
    bracket = beta * beta - 2.0 * (S * S - Q) / (n * (n - 1))
    return k_min, beta, bracket


def _criterion(beta: np.ndarray, bracket: np.ndarray, lam: float, mode: str) -> float:
    survivors = np.abs(beta) >= lam
    base = float(bracket[survivors].sum())
    if mode == "STCV":
        return base + lam * lam * int(survivors.sum())
    return base


def cv_criterion(sample: Sample, tables: WaveletTables, j: int, lam: float,
                 mode: str = "HTCV") -> float:
    """CV_j(lam): sum over translates with |beta_{j,k}| >= lam of the risk proxy.

    The hard bracket is beta^2 - 2 (S^2 - Q)/(n (n-1)); STCV adds lam^2 per
    survivor on top of the identical hard sum, so the two modes differ by
    exactly lam^2 times the survivor count.
    """
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    if lam < 0:
        raise ValueError(f"negative threshold {lam}")
    _, beta, bracket = _level_stats(sample, tables, j)
    return _criterion(beta, bracket, lam, mode)


def _candidates(beta: np.ndarray) -> np.ndarray:
    """Thresholds that can change the criterion: breakpoints and just above.

    The survivor set is constant on each interval (b_i, b_{i+1}] between
    consecutive distinct |beta| values, so the minimum over all lam >= 0 is
    attained either at a breakpoint or immediately above one (the soft
    criterion grows with lam inside an interval). One candidate above the
    largest |beta| covers the empty survivor set.
    """
    breaks = np.unique(np.abs(beta))
    above = np.nextafter(breaks, np.inf)
    top = breaks[-1] * (1.0 + 1e-9) + 1e-300
    cands = np.unique(np.concatenate([[0.0], breaks, above, [top]]))
    return cands


def _select_level(beta: np.ndarray, bracket: np.ndarray, mode: str) -> tuple[float, float]:
    """Exact argmin of the criterion over the candidate set, ties to smaller lam."""
    a = np.abs(beta)
    order = np.argsort(a, kind="stable")
    a_sorted = a[order]
    suffix = np.concatenate([np.cumsum(bracket[order][::-1])[::-1], [0.0]])
    best_lam = None
    best_val = math.inf
    for lam in _candidates(beta):
        i = int(np.searchsorted(a_sorted, lam, side="left"))
        val = float(suffix[i])
        if mode == "STCV":
            val += lam * lam * (len(a_sorted) - i)
        if val < best_val:
            best_lam, best_val = float(lam), val
    return best_lam, best_val


def select_lambda(sample: Sample, tables: WaveletTables, j: int,
                  mode: str = "HTCV") -> float:
    """The threshold minimizing CV_j over all lam >= 0 (ties to smallest)."""
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    _, beta, bracket = _level_stats(sample, tables, j)
    lam, _ = _select_level(beta, bracket, mode)
    return lam


def select_j1(criterion_values: dict[int, float], j0: int, j_star: int) -> int:
    """Start of the all-zero tail of CV_j(lam_hat_j), or j_star if there is none.

    Zero is tested with absolute tolerance 1e-12; an exactly empty survivor
    set gives an exact zero.
    """
    if j_star < j0:
        raise ValueError(f"j_star={j_star} below j0={j0}")
    j1 = None
    for j in range(j_star, j0 - 1, -1):
        if abs(criterion_values[j]) <= _ZERO_TOL:
            j1 = j
        else:
            break
    return j_star if j1 is None else j1


def fit_cv(sample: Sample, tables: WaveletTables, mode: str = "HTCV",
           grid_points: int = 4096) -> tuple[DensityEstimate, CvSelection]:
    """Cross-validated wavelet estimate: select, threshold, reconstruct.

    j0 is the smallest integer larger than log(n)/(1+N) and j_star = log2(n)
    (floored); every level in between gets its own minimizing threshold. The
    hard criterion drives a hard-thresholded estimate, the soft criterion a
    soft one.
    """
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    n = sample.n
    if n < 2:
        raise ValueError(f"cross validation needs n >= 2, got n={n}")
    N = tables.vanishing_moments
    j0 = math.floor(math.log(n) / (1 + N)) + 1
    j_star = math.floor(math.log2(n))

    lambdas: dict[int, float] = {}
    values: dict[int, float] = {}
    kept: dict[int, CoefficientLevel] = {}
    for j in range(j0, j_star + 1):
        k_min, beta, bracket = _level_stats(sample, tables, j)
        lam, val = _select_level(beta, bracket, mode)
        lambdas[j] = lam
        values[j] = val
        kept[j] = CoefficientLevel(j=j, k_min=k_min, values=beta)
    j1_hat = select_j1(values, j0, j_star)

    selection = CvSelection(
        mode=mode,
        j0=j0,
        j_star=j_star,
        j1_hat=j1_hat,
        lambdas=lambdas,
        criterion_values=tuple(
            CvCriterionValue(j=j, lam=lambdas[j], value=values[j])
            for j in range(j0, j_star + 1)
        ),
    )

    lo, hi = sample.support
    k_min, k_max = tables.k_range(j0, lo, hi)
    S, _ = _level_sums(tables, "phi", j0, sample.values, k_min, k_max)
    scaling = CoefficientLevel(j=j0, k_min=k_min, values=S * 2.0 ** (j0 / 2) / n)
    coeffs = CoefficientSet(
        j0=j0,
        scaling=scaling,
        details=tuple(kept[j] for j in range(j0, j1_hat + 1)),
        n=n,
        support=sample.support,
    )
    plan = ThresholdPlan(
        mode="hard" if mode == "HTCV" else "soft",
        lambdas={j: lambdas[j] for j in range(j0, j1_hat + 1)},
        j0=j0,
        j1=j1_hat,
    )
    thresholded = apply_plan(coeffs, plan)
    meta = f"{mode} j0={j0} j1={j1_hat} n={n}"
    return reconstruct(thresholded, tables, grid_points, meta=meta), selection
