"""Streaming distribution statistics and the exponential dimension fit.

Accumulators keep raw moment sums (N, sum y, sum y^2, sum y^3) plus a fixed
40-bin histogram on [0, 1], so millions of values stream through without
being stored. Population (divide-by-N) conventions are used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "BIN_WIDTH",
    "N_BINS",
    "ExpFitResult",
    "MomentAccumulator",
    "SummaryStats",
    "bin_centers",
    "fit_exponential",
    "relative_frequency_percent",
    "summarize",
]

N_BINS = 40
BIN_WIDTH = 0.025
_EDGE_TOL = 1e-9


class MomentAccumulator:
    """Mergeable raw-moment sums plus a fixed-bin histogram on [0, 1].

    Binning can be disabled for quantities that are not confined to the
    unit interval (raw, un-normalised coherence values).
    """

    __slots__ = ("count", "sum1", "sum2", "sum3", "bins", "binned")

    def __init__(self, binned: bool = True):
        self.count = 0
        self.sum1 = 0.0
        self.sum2 = 0.0
        self.sum3 = 0.0
        self.bins = np.zeros(N_BINS, dtype=np.int64)
        self.binned = binned

    def ingest(self, value: float) -> "MomentAccumulator":
        return self.ingest_many(np.asarray([value], dtype=float))

    def ingest_many(self, values) -> "MomentAccumulator":
        v = np.asarray(values, dtype=float).ravel()
        if v.size == 0:
            return self
        if np.isnan(v).any():
            raise ValueError("cannot ingest NaN")
        if self.binned:
            if (v < -_EDGE_TOL).any() or (v > 1.0 + _EDGE_TOL).any():
                raise ValueError("binned accumulator accepts values in [0, 1] only")
            idx = np.clip(np.floor(v / BIN_WIDTH).astype(np.int64), 0, N_BINS - 1)
            self.bins += np.bincount(idx, minlength=N_BINS)
        self.count += v.size
        self.sum1 += float(v.sum())
        v2 = v * v
        self.sum2 += float(v2.sum())
        self.sum3 += float((v2 * v).sum())
        return self

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        """New accumulator equivalent to ingesting self's then other's data."""
        if self.binned != other.binned:
            raise ValueError("cannot merge binned with unbinned accumulators")
        out = MomentAccumulator(binned=self.binned)
        out.count = self.count + other.count
        out.sum1 = self.sum1 + other.sum1
        out.sum2 = self.sum2 + other.sum2
        out.sum3 = self.sum3 + other.sum3
        out.bins = self.bins + other.bins
        return out


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    std: float
    skewness: float


def summarize(acc: MomentAccumulator) -> SummaryStats:
    """Population mean, standard deviation and skewness from the raw moments."""
    if acc.count < 2:
        raise ValueError("need at least two values")
    n = acc.count
    mean = acc.sum1 / n
    var = max(acc.sum2 / n - mean * mean, 0.0)
    std = math.sqrt(var)
    cubed = std * std * std
    if cubed == 0.0:  # zero spread, including denormal underflow
        raise ValueError("skewness undefined: standard deviation is zero")
    skewness = (acc.sum3 / n - 3.0 * mean * acc.sum2 / n + 2.0 * mean**3) / cubed
    return SummaryStats(mean=mean, std=std, skewness=skewness)


def relative_frequency_percent(acc: MomentAccumulator) -> np.ndarray:
    """Histogram as percentages of the ingested count; sums to 100."""
    if acc.count == 0:
        raise ValueError("empty accumulator")
    return 100.0 * acc.bins / acc.count


def bin_centers() -> np.ndarray:
    return (np.arange(N_BINS) + 0.5) * BIN_WIDTH


@dataclass(frozen=True)
class ExpFitResult:
    """Parameters of y = alpha * exp(-beta * d) + gamma and the fit quality."""

    alpha: float
    beta: float
    gamma: float
    sse: float
    converged: bool

    def predict(self, d) -> np.ndarray:
        return self.alpha * np.exp(-self.beta * np.asarray(d, dtype=float)) + self.gamma


def fit_exponential(
    points: Iterable[tuple[float, float]],
    max_iter: int = 1000,
    rel_tol: float = 1e-12,
) -> ExpFitResult:
    """Least-squares fit of y ~ alpha exp(-beta d) + gamma.

    Damped Gauss-Newton with step halving; the initial guess anchors gamma
    at the largest-d value and alpha at the smallest-d one with beta = 1/2.
    Non-convergence is reported through the flag, not raised.
    """
    pts = sorted((float(d), float(y)) for d, y in points)
    if len(pts) < 4:
        raise ValueError("need at least 4 points")
    d = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])

    gamma0 = y[-1]
    beta0 = 0.5
    alpha0 = (y[0] - gamma0) * math.exp(beta0 * d[0])
    p = np.array([alpha0, beta0, gamma0])

    def residual(params: np.ndarray) -> np.ndarray:
        return y - (params[0] * np.exp(-params[1] * d) + params[2])

    r = residual(p)
    sse = float(r @ r)
    converged = False
    for _ in range(max_iter):
        decay = np.exp(-p[1] * d)
        jac = np.column_stack([decay, -p[0] * d * decay, np.ones_like(d)])
        step, *_ = np.linalg.lstsq(jac, r, rcond=None)
        scale = 1.0
        accepted = False
        while scale >= 1e-14:
            trial = p + scale * step
            r_trial = residual(trial)
            sse_trial = float(r_trial @ r_trial)
            if sse_trial <= sse:
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            break
        p, r = trial, r_trial
        if sse - sse_trial <= rel_tol * max(sse, 1e-300):
            sse = sse_trial
            converged = True
            break
        sse = sse_trial

    r = residual(p)
    return ExpFitResult(
        alpha=float(p[0]),
        beta=float(p[1]),
        gamma=float(p[2]),
        sse=float(r @ r),
        converged=converged,
    )
