"""Streaming sample statistics with order-robust merging.

``SampleStats`` accumulates count, mean and the second through fourth central
moment sums in one pass (Welford-style updates).  Two accumulators can be
merged exactly, so samples may be processed in independent chunks and combined
in any grouping; merging is associative up to float round-off.  The third
moment sum is carried because the fourth cannot be merged without it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError


@dataclass
class SampleStats:
    """Running count, mean and central moment sums M2, M3, M4."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    m3: float = 0.0
    m4: float = 0.0

    def update(self, x: float) -> None:
        """Fold one observation into the accumulator."""
        n1 = self.count
        n = n1 + 1
        self.count = n
        delta = x - self.mean
        delta_n = delta / n
        delta_n2 = delta_n * delta_n
        term1 = delta * delta_n * n1
        self.mean += delta_n
        self.m4 += (
            term1 * delta_n2 * (n * n - 3 * n + 3)
            + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3
        )
        self.m3 += term1 * delta_n * (n - 2) - 3.0 * delta_n * self.m2
        self.m2 += term1

    def merge(self, other: "SampleStats") -> "SampleStats":
        """Exact combination of two accumulators (new instance)."""
        if other.count == 0:
            return SampleStats(self.count, self.mean, self.m2, self.m3, self.m4)
        if self.count == 0:
            return SampleStats(other.count, other.mean, other.m2, other.m3, other.m4)
        na, nb = self.count, other.count
        n = na + nb
        delta = other.mean - self.mean
        delta2 = delta * delta
        mean = self.mean + delta * nb / n
        m2 = self.m2 + other.m2 + delta2 * na * nb / n
        m3 = (
            self.m3
            + other.m3
            + delta * delta2 * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n
        )
        m4 = (
            self.m4
            + other.m4
            + delta2 * delta2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * delta2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n
        )
        return SampleStats(n, mean, m2, m3, m4)

    @classmethod
    def from_values(cls, values) -> "SampleStats":
        stats = cls()
        for x in values:
            stats.update(float(x))
        return stats

    @property
    def variance(self) -> float:
        """Unbiased sample variance, M2/(count-1)."""
        if self.count < 2:
            raise ValidationError("variance needs at least two samples")
        return self.m2 / (self.count - 1)

    @property
    def fourth_central_moment(self) -> float:
        if self.count < 1:
            raise ValidationError("no samples")
        return self.m4 / self.count

    @property
    def variance_stderr(self) -> float:
        """Standard error of the sample variance from the fourth central moment:
        stderr^2 = (m4 - s^4 (M-3)/(M-1)) / M."""
        m = self.count
        s_sq = self.variance
        inner = self.fourth_central_moment - s_sq * s_sq * (m - 3) / (m - 1)
        return math.sqrt(max(inner, 0.0) / m)

    @property
    def mean_stderr(self) -> float:
        return math.sqrt(self.variance / self.count)
