"""Distribution-shape statistics: skewness index, quantiles, binning, and normality."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np


def _as_array(values: Sequence[float], name: str = "values") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty one-dimensional sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def quantile(values: Sequence[float], p: float) -> float:
    """Quantile by linear interpolation between closest ranks.

    The sorted sample is read at fractional position (n - 1) * p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"quantile level must lie in [0, 1], got {p}")
    arr = _as_array(values)
    return float(np.quantile(arr, p, method="linear"))


@dataclass(frozen=True)
class SkewnessResult:
    """Mean-median skewness index, bounded to [-1, 1].

    gm = (mean - median) / mean absolute deviation from the median.  Constant
    data has zero deviation; by convention gm is then 0 and degenerate is set.
    """

    gm: float
    mean: float
    median: float
    abs_deviation: float
    n: int
    degenerate: bool


def gm_index(values: Sequence[float]) -> SkewnessResult:
    arr = _as_array(values)
    mean = float(np.mean(arr))
    median = float(np.quantile(arr, 0.5, method="linear"))
    abs_dev = float(np.mean(np.abs(arr - median)))
    if abs_dev == 0.0:
        return SkewnessResult(0.0, mean, median, 0.0, arr.size, True)
    gm = (mean - median) / abs_dev
    # |gm| <= 1 holds mathematically; the clamp only absorbs last-ulp rounding.
    gm = max(-1.0, min(1.0, gm))
    return SkewnessResult(gm, mean, median, abs_dev, arr.size, False)


def coefficient_of_variation(values: Sequence[float]) -> float:
    """Sample standard deviation (n - 1 denominator) divided by the mean."""
    arr = _as_array(values)
    if arr.size < 2:
        raise ValueError("coefficient of variation requires at least 2 observations")
    mean = float(np.mean(arr))
    if mean == 0.0:
        raise ValueError("coefficient of variation undefined for zero mean")
    return float(np.std(arr, ddof=1)) / mean


@dataclass(frozen=True)
class BoxplotSummary:
    q1: float
    q2: float
    q3: float
    iqr: float
    fence_low: float
    fence_high: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]


def boxplot_summary(values: Sequence[float]) -> BoxplotSummary:
    """Quartiles with 1.5-IQR fences; whiskers reach the most extreme data inside."""
    arr = _as_array(values)
    q1 = float(np.quantile(arr, 0.25, method="linear"))
    q2 = float(np.quantile(arr, 0.50, method="linear"))
    q3 = float(np.quantile(arr, 0.75, method="linear"))
    iqr = q3 - q1
    fence_low = q1 - 1.5 * iqr
    fence_high = q3 + 1.5 * iqr
    inside = arr[(arr >= fence_low) & (arr <= fence_high)]
    # the central order statistics always sit inside the fences
    assert inside.size > 0
    outliers = arr[(arr < fence_low) | (arr > fence_high)]
    return BoxplotSummary(
        q1=q1,
        q2=q2,
        q3=q3,
        iqr=iqr,
        fence_low=fence_low,
        fence_high=fence_high,
        whisker_low=float(inside.min()),
        whisker_high=float(inside.max()),
        outliers=tuple(float(v) for v in np.sort(outliers)),
    )


@dataclass(frozen=True)
class HistogramSummary:
    """Left-closed right-open bins anchored at a multiple of the bin width."""

    bin_width: float
    edges: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.counts)


def _snap_floor(q: float) -> int:
    # values sitting on a bin edge up to float noise belong to the right bin
    r = round(q)
    if abs(q - r) <= 1e-9 * max(1.0, abs(q)):
        return int(r)
    return int(math.floor(q))


def histogram(values: Sequence[float], bin_width: float) -> HistogramSummary:
    """Fixed-width binning that conserves the count: every value lands in a bin."""
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    arr = _as_array(values)
    anchor_idx = _snap_floor(float(arr.min()) / bin_width)
    indices = [_snap_floor(v / bin_width - anchor_idx) for v in arr.tolist()]
    n_bins = max(indices) + 1
    counts = [0] * n_bins
    for k in indices:
        assert 0 <= k < n_bins
        counts[k] += 1
    edges = tuple((anchor_idx + i) * bin_width for i in range(n_bins + 1))
    result = HistogramSummary(bin_width=bin_width, edges=edges, counts=tuple(counts))
    assert result.n == arr.size
    return result


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Plain product-moment correlation; constant input is a hard error."""
    ax = _as_array(x, "x")
    ay = _as_array(y, "y")
    if ax.size != ay.size:
        raise ValueError("x and y must have equal length")
    if ax.size < 2:
        raise ValueError("pearson requires at least 2 observations")
    xc = ax - ax.mean()
    yc = ay - ay.mean()
    sx = float(xc @ xc)
    sy = float(yc @ yc)
    if sx == 0.0 or sy == 0.0:
        raise ValueError("pearson undefined for constant input")
    r = float(xc @ yc) / math.sqrt(sx * sy)
    return max(-1.0, min(1.0, r))


# ---------------------------------------------------------------------------
# Shapiro-Wilk normality test, after Royston (1992, Statistics and Computing 2)
# as revised in Algorithm AS R94 (Royston 1995, Applied Statistics 44).  Valid
# for 3 <= n <= 5000; n = 3 uses the exact weight and p-value transform.
# ---------------------------------------------------------------------------

_SW_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_SW_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_SW_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_SW_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_SW_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_SW_C6 = (-0.4803, -0.082676, 0.0030302)
_SW_G = (-2.273, 0.459)
_SW_PI6 = 1.909859  # 6/pi, truncated as published
_SW_STQR = 1.047198  # asin(sqrt(3/4)), truncated as published


def _poly(coeffs: Sequence[float], x: float) -> float:
    total = 0.0
    for c in reversed(coeffs):
        total = total * x + c
    return total


_sw_weight_cache: dict[int, tuple[np.ndarray, float]] = {}


def _sw_weights(n: int) -> tuple[np.ndarray, float]:
    """Positive half-weights for the paired-difference form, and their full ssq."""
    cached = _sw_weight_cache.get(n)
    if cached is not None:
        return cached
    if n == 3:
        weights = np.array([math.sqrt(0.5)])
        _sw_weight_cache[n] = (weights, 1.0)
        return weights, 1.0
    inv_cdf = NormalDist().inv_cdf
    half = n // 2
    # Blom-style expected normal order statistics for the lower half (negative)
    m = np.array([inv_cdf((i - 0.375) / (n + 0.25)) for i in range(1, half + 1)])
    summ2 = 2.0 * float(m @ m)
    ssumm2 = math.sqrt(summ2)
    rsn = 1.0 / math.sqrt(n)
    a1 = _poly(_SW_C1, rsn) - m[0] / ssumm2
    if n > 5:
        a2 = _poly(_SW_C2, rsn) - m[1] / ssumm2
        fac = math.sqrt(
            (summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2)
            / (1.0 - 2.0 * a1**2 - 2.0 * a2**2)
        )
        weights = np.concatenate(([a1, a2], -m[2:] / fac))
    else:
        fac = math.sqrt((summ2 - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a1**2))
        weights = np.concatenate(([a1], -m[1:] / fac))
    ssq = 2.0 * float(weights @ weights)
    _sw_weight_cache[n] = (weights, ssq)
    return weights, ssq


def _sw_pvalue(w: float, n: int) -> float:
    if n == 3:
        p = _SW_PI6 * (math.asin(math.sqrt(w)) - _SW_STQR)
        return max(0.0, min(1.0, p))
    y = math.log(max(1.0 - w, 1e-300))
    if n <= 11:
        gamma = _poly(_SW_G, float(n))
        if y >= gamma:
            return 0.0
        y = -math.log(gamma - y)
        m = _poly(_SW_C3, float(n))
        s = math.exp(_poly(_SW_C4, float(n)))
    else:
        ln_n = math.log(n)
        m = _poly(_SW_C5, ln_n)
        s = math.exp(_poly(_SW_C6, ln_n))
    p = 1.0 - NormalDist().cdf((y - m) / s)
    return max(0.0, min(1.0, p))


@dataclass(frozen=True)
class ShapiroWilkResult:
    w_statistic: float
    p_value: float
    n: int


def shapiro_wilk(values: Sequence[float]) -> ShapiroWilkResult:
    """W statistic and upper-tail p-value for the hypothesis of normality."""
    arr = np.sort(_as_array(values))
    n = arr.size
    if n < 3:
        raise ValueError("shapiro_wilk requires at least 3 observations")
    if n > 5000:
        raise ValueError("shapiro_wilk approximation is not valid above n = 5000")
    if arr[0] == arr[-1]:
        raise ValueError("shapiro_wilk is undefined for constant data")
    weights, ssq = _sw_weights(n)
    half = n // 2
    diffs = arr[::-1][:half] - arr[:half]
    num = float(weights @ diffs)
    centered = arr - arr.mean()
    den = float(centered @ centered)
    w = min(num * num / (ssq * den), 1.0)
    return ShapiroWilkResult(w_statistic=w, p_value=_sw_pvalue(w, n), n=n)
