"""Radius distribution fitting, chi-squared goodness of fit and boxplot summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaincc

from .antenna import RadiusKind, RadiusModel
from .geom import EmptyInput

MIN_EXPECTED = 1e-9


class InsufficientData(ValueError):
    pass


class ZeroExpected(ValueError):
    pass


@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.edges) != len(self.counts) + 1:
            raise ValueError("need exactly one more edge than counts")
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("bin edges must be strictly increasing")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")

    @property
    def n(self) -> int:
        return sum(self.counts)

    @classmethod
    def from_data(cls, data: Sequence[float], edges: Sequence[float]) -> Histogram:
        data = np.asarray(data, dtype=float)
        edges = np.asarray(edges, dtype=float)
        if data.min() < edges[0] or data.max() > edges[-1]:
            raise ValueError(f"data range [{data.min()}, {data.max()}] exceeds the bins "
                             f"[{edges[0]}, {edges[-1]}]")
        counts, _ = np.histogram(data, bins=edges)
        return cls(tuple(float(e) for e in edges), tuple(int(c) for c in counts))


@dataclass(frozen=True)
class FitReport:
    dist: RadiusModel
    observed: tuple[int, ...]
    expected: tuple[float, ...]
    per_bin_contrib: tuple[float, ...]
    chi2: float
    dof: int
    p_value: float

    def to_dict(self) -> dict:
        return {
            "dist": self.dist.to_dict(),
            "observed": list(self.observed),
            "expected": list(self.expected),
            "per_bin_contrib": list(self.per_bin_contrib),
            "chi2": self.chi2,
            "dof": self.dof,
            "p_value": self.p_value,
        }


@dataclass(frozen=True)
class BoxplotSummary:
    mean: float
    median: float
    q1: float
    q3: float
    whisker_lo: float
    whisker_hi: float
    n: int


def fit_moments(data: Sequence[float], kind: RadiusKind | str) -> RadiusModel:
    """Mean and population standard deviation of ``data`` as a radius model."""
    kind = RadiusKind(kind)
    if kind is RadiusKind.FIXED:
        raise ValueError("only uniform and normal fits are supported")
    x = np.asarray(data, dtype=float)
    if x.size < 2:
        raise InsufficientData("need at least two observations")
    return RadiusModel(kind, float(x.mean()), float(x.std(ddof=0)))


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def expected_counts(model: RadiusModel, h: Histogram) -> list[float]:
    n = h.n
    edges = h.edges
    if model.kind is RadiusKind.NORMAL:
        if model.sigma == 0:
            raise ValueError("normal model with zero spread has no density")
        cdf = [normal_cdf((e - model.mu) / model.sigma) for e in edges]
        return [n * (b - a) for a, b in zip(cdf, cdf[1:])]
    if model.kind is RadiusKind.UNIFORM:
        lo, hi = model.support
        width = hi - lo
        if width == 0:
            raise ValueError("uniform model with zero spread has no density")
        return [n * max(0.0, min(b, hi) - max(a, lo)) / width for a, b in zip(edges, edges[1:])]
    raise ValueError("expected counts need a uniform or normal model")


def chi2_sf(x: float, dof: int) -> float:
    """Upper tail of the chi-squared distribution."""
    if dof < 1:
        raise ValueError("dof must be at least 1")
    return float(gammaincc(dof / 2.0, x / 2.0))


def chi2_test(h: Histogram, model: RadiusModel, dof: int | None = None) -> FitReport:
    """Pearson test of ``h`` against ``model``; ``dof`` defaults to bins - 1."""
    exp = expected_counts(model, h)
    if min(exp) < MIN_EXPECTED:
        raise ZeroExpected("a bin has (near) zero expected frequency")
    contrib = [(o - e) ** 2 / e for o, e in zip(h.counts, exp)]
    stat = float(sum(contrib))
    dof = len(h.counts) - 1 if dof is None else dof
    return FitReport(model, h.counts, tuple(exp), tuple(contrib), stat, dof, chi2_sf(stat, dof))


def boxplot_summary(errors: Sequence[float]) -> BoxplotSummary:
    x = np.asarray(errors, dtype=float)
    if x.size == 0:
        raise EmptyInput("boxplot of an empty sample")
    q1, med, q3 = np.percentile(x, [25, 50, 75])
    iqr = q3 - q1
    return BoxplotSummary(
        mean=float(x.mean()),
        median=float(med),
        q1=float(q1),
        q3=float(q3),
        whisker_lo=float(q1 - 1.5 * iqr),
        whisker_hi=float(q3 + 1.5 * iqr),
        n=int(x.size),
    )
