"""Order statistics, moments, and histograms of record-gap ensembles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, EmptyInputError

#: Sentinel for automatic histogram bin selection (Freedman-Diaconis).
AUTO = "auto"

#: Conventions recorded alongside outputs so downstream plots are well-defined.
QUARTILE_CONVENTION = "tukey-hinges"
SKEWNESS_CONVENTION = "population-g1"


@dataclass(frozen=True)
class SummaryStats:
    count: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    stddev: float  # sample, n-1 denominator
    skewness: float  # population g1 = m3 / m2^(3/2)
    skewness_degenerate: bool = False


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    total: int

    def bin_centers(self) -> tuple[float, ...]:
        edges = self.bin_edges
        return tuple((edges[i] + edges[i + 1]) / 2.0 for i in range(len(edges) - 1))

    def densities(self) -> tuple[float, ...]:
        """Empirical probability density per bin (counts normalized by total*width)."""
        edges = self.bin_edges
        return tuple(
            c / (self.total * (edges[i + 1] - edges[i]))
            for i, c in enumerate(self.counts)
        )


def _median_sorted(values: Sequence[float]) -> float:
    n = len(values)
    mid = n // 2
    if n % 2 == 1:
        return float(values[mid])
    return (values[mid - 1] + values[mid]) / 2.0


def tukey_hinges(values: Sequence[float]) -> tuple[float, float, float]:
    """(q1, median, q3) by Tukey hinges.

    Halves are split at the median and include the middle element when the
    count is odd, so all three statistics are exact order statistics (or
    midpoints of two) of the data.
    """
    if len(values) == 0:
        raise EmptyInputError("no values")
    v = sorted(float(x) for x in values)
    n = len(v)
    lower = v[: (n + 1) // 2]
    upper = v[n // 2 :]
    return _median_sorted(lower), _median_sorted(v), _median_sorted(upper)


def skewness(values: Sequence[float]) -> float:
    """Population skewness g1 = m3 / m2^(3/2) with m_k the central moments.

    Moments are accumulated in sorted order so the result is exactly
    permutation-invariant.
    """
    if len(values) < 3:
        raise DegenerateInputError(
            f"skewness needs at least 3 values, got {len(values)}"
        )
    v = np.sort(np.asarray(values, dtype=np.float64))
    centered = v - v.mean()
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        raise DegenerateInputError("skewness undefined for constant data")
    m3 = float(np.mean(centered**3))
    return m3 / m2**1.5


def summarize(values: Sequence[float]) -> SummaryStats:
    """Full summary of a data set; see SummaryStats for the conventions.

    Skewness needs at least 3 values and nonzero variance; otherwise it is
    reported as 0 with the degenerate flag set, so bulk sweeps never abort.
    """
    if len(values) == 0:
        raise EmptyInputError("cannot summarize an empty data set")
    # sorted order makes every statistic exactly permutation-invariant
    v = np.sort(np.asarray(values, dtype=np.float64))
    q1, med, q3 = tukey_hinges(values)
    stddev = float(v.std(ddof=1)) if v.size >= 2 else 0.0
    try:
        skew = skewness(values)
        degenerate = False
    except DegenerateInputError:
        skew = 0.0
        degenerate = True
    return SummaryStats(
        count=int(v.size),
        min=float(v.min()),
        q1=q1,
        median=med,
        q3=q3,
        max=float(v.max()),
        mean=float(v.mean()),
        stddev=stddev,
        skewness=skew,
        skewness_degenerate=degenerate,
    )


def histogram(values: Sequence[float], bin_count: int | str = AUTO) -> Histogram:
    """Equal-width histogram spanning [min, max].

    bin_count = AUTO applies the Freedman-Diaconis rule (IQR from Tukey
    hinges), falling back to ceil(sqrt(N)) bins when the IQR is zero.
    """
    if len(values) == 0:
        raise EmptyInputError("cannot bin an empty data set")
    v = np.asarray(values, dtype=np.float64)
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        edges = np.array([lo - 0.5, lo + 0.5])
        return Histogram(
            bin_edges=tuple(edges), counts=(int(v.size),), total=int(v.size)
        )
    if bin_count == AUTO:
        q1, _, q3 = tukey_hinges(values)
        iqr = q3 - q1
        if iqr > 0.0:
            width = 2.0 * iqr / v.size ** (1.0 / 3.0)
            bins = max(1, math.ceil((hi - lo) / width))
        else:
            bins = max(1, math.ceil(math.sqrt(v.size)))
    else:
        bins = int(bin_count)
        if bins < 1:
            raise ValueError(f"bin_count must be >= 1, got {bin_count}")
    counts, edges = np.histogram(v, bins=bins, range=(lo, hi))
    return Histogram(
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        total=int(v.size),
    )
