"""Summary statistics for ensemble observables.

Quartiles use linear interpolation between closest ranks: the q-quantile of
sorted data ``x[0..n-1]`` sits at fractional position ``q * (n - 1)``.
Boxplots follow Tukey: whiskers reach the most extreme points within
1.5 IQR of the box, anything beyond is an outlier.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class EmptySampleError(ValueError):
    pass


def _as_sample(values) -> np.ndarray:
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise EmptySampleError("need at least one value")
    return x


def quantile(sorted_x: np.ndarray, q: float) -> float:
    pos = q * (len(sorted_x) - 1)
    lo = math.floor(pos)
    hi = min(lo + 1, len(sorted_x) - 1)
    frac = pos - lo
    return float(sorted_x[lo] + (sorted_x[hi] - sorted_x[lo]) * frac)


@dataclass(frozen=True)
class BoxplotStats:
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple
    n: int
    mean: float

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1


def summarize(values) -> BoxplotStats:
    x = np.sort(_as_sample(values))
    q1, med, q3 = quantile(x, 0.25), quantile(x, 0.5), quantile(x, 0.75)
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = x[(x >= lo_fence) & (x <= hi_fence)]
    outliers = tuple(float(v) for v in x[(x < lo_fence) | (x > hi_fence)])
    return BoxplotStats(med, q1, q3, float(inside.min()), float(inside.max()), outliers, len(x), float(x.mean()))


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    frequencies: np.ndarray  # normalised, sums to 1
    n: int

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])


def freedman_diaconis_edges(values) -> np.ndarray:
    """Bin edges of width 2 IQR / n^(1/3), covering the data."""
    x = np.sort(_as_sample(values))
    lo, hi = float(x[0]), float(x[-1])
    width = 2.0 * (quantile(x, 0.75) - quantile(x, 0.25)) / len(x) ** (1 / 3)
    if hi == lo:
        return np.array([lo - 0.5, lo + 0.5])
    if width <= 0:
        width = (hi - lo) / max(1, math.ceil(math.sqrt(len(x))))
    n_bins = max(1, min(10_000, math.ceil((hi - lo) / width)))
    return np.linspace(lo, hi, n_bins + 1)


def histogram(values, bins=None) -> Histogram:
    """Normalised histogram.  ``bins`` is a positive bin width, an array of
    edges, or None for Freedman-Diaconis.  A value exactly on an inner edge
    falls into the bin to its right; the last bin is closed.  Values outside
    the edges are dropped from the counts but still count in ``n``."""
    x = _as_sample(values)
    if bins is None:
        edges = freedman_diaconis_edges(x)
    elif np.ndim(bins) == 0:
        width = float(bins)
        if not width > 0:
            raise ValueError("bin width must be positive")
        lo = math.floor(x.min() / width) * width
        n_bins = max(1, math.floor((x.max() - lo) / width) + 1)
        edges = lo + width * np.arange(n_bins + 1)
    else:
        edges = np.asarray(bins, dtype=float)
        if edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("edges must be strictly increasing")
    idx = np.searchsorted(edges, x, side="right") - 1
    idx[x == edges[-1]] = len(edges) - 2
    ok = (idx >= 0) & (idx < len(edges) - 1)
    counts = np.bincount(idx[ok], minlength=len(edges) - 1).astype(float)
    return Histogram(edges, counts / len(x), len(x))


def histogram_mode(values, bins=None) -> float:
    """Centre of the most populated histogram bin (first one on ties)."""
    h = histogram(values, bins)
    return float(h.centers[int(np.argmax(h.frequencies))])


def tail_prob(values, threshold: float) -> float:
    x = _as_sample(values)
    return float(np.count_nonzero(x > threshold)) / x.size


def skewness(values) -> float:
    """Fisher moment coefficient m3 / m2^(3/2) (population moments)."""
    x = _as_sample(values)
    if x.size < 3:
        raise ValueError("skewness needs at least 3 values")
    d = x - x.mean()
    m2 = float(np.mean(d * d))
    if m2 <= 1e-300 or m2 <= (1e-12 * float(np.abs(x).max())) ** 2:
        raise ValueError("skewness undefined for (near) zero variance")
    return float(np.mean(d ** 3)) / m2 ** 1.5
