"""Antenna radius models, irregular azimuth patterns and ranging error."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

SQRT3 = math.sqrt(3.0)
NORMAL_FLOOR_M = 1.0
MANUFACTURER_RADIUS_M = 60.0


class RadiusKind(str, Enum):
    UNIFORM = "uniform"
    NORMAL = "normal"
    FIXED = "fixed"


@dataclass(frozen=True)
class RadiusModel:
    """Distribution of the receiving radius seen from the ground device.

    ``UNIFORM`` is parameterized by its moments, i.e. the support is
    ``mu +- sqrt(3) * sigma``.
    """

    kind: RadiusKind
    mu: float
    sigma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", RadiusKind(self.kind))
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")
        if self.kind is RadiusKind.UNIFORM and self.support[0] <= 0:
            raise ValueError(f"uniform support {self.support} reaches non-positive radii")

    @classmethod
    def fixed(cls, r: float) -> RadiusModel:
        return cls(RadiusKind.FIXED, r, 0.0)

    @classmethod
    def uniform(cls, mu: float, sigma: float) -> RadiusModel:
        return cls(RadiusKind.UNIFORM, mu, sigma)

    @classmethod
    def normal(cls, mu: float, sigma: float) -> RadiusModel:
        return cls(RadiusKind.NORMAL, mu, sigma)

    @property
    def support(self) -> tuple[float, float]:
        if self.kind is RadiusKind.UNIFORM:
            half = SQRT3 * self.sigma
            return (self.mu - half, self.mu + half)
        if self.kind is RadiusKind.FIXED:
            return (self.mu, self.mu)
        return (NORMAL_FLOOR_M, math.inf)

    def with_sigma(self, sigma: float) -> RadiusModel:
        return RadiusModel(self.kind, self.mu, sigma)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "mu": self.mu, "sigma": self.sigma}

    @classmethod
    def from_dict(cls, d: dict) -> RadiusModel:
        unknown = set(d) - {"kind", "mu", "sigma"}
        if unknown:
            raise ValueError(f"unknown radius model fields: {sorted(unknown)}")
        return cls(RadiusKind(d["kind"]), float(d["mu"]), float(d.get("sigma", 0.0)))


def sample_radius(model: RadiusModel, rng: np.random.Generator) -> float:
    if model.kind is RadiusKind.FIXED or model.sigma == 0.0:
        return model.mu
    if model.kind is RadiusKind.UNIFORM:
        lo, hi = model.support
        return float(rng.uniform(lo, hi))
    # rejection keeps the draw a truncated normal rather than a clipped one
    while True:
        r = float(rng.normal(model.mu, model.sigma))
        if r > NORMAL_FLOOR_M:
            return r


class AzimuthPattern:
    """Receiving radius as a function of azimuth around the ground device.

    ``samples[i]`` is the radius at azimuth ``2*pi*i/K``; values in between
    are linearly interpolated, wrapping around at 2*pi.
    """

    def __init__(self, samples):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1 or len(samples) < 2:
            raise ValueError("pattern needs at least two azimuth samples")
        if np.any(samples <= 0):
            raise ValueError("pattern radii must be positive")
        self.samples = samples
        self._step = 2.0 * math.pi / len(samples)

    def __len__(self):
        return len(self.samples)

    def radius(self, theta):
        """Radius at azimuth ``theta`` (radians, scalar or array)."""
        k = len(self.samples)
        t = np.mod(np.asarray(theta, dtype=float), 2.0 * math.pi) / self._step
        i0 = np.floor(t).astype(int) % k
        frac = t - np.floor(t)
        r = (1.0 - frac) * self.samples[i0] + frac * self.samples[(i0 + 1) % k]
        return float(r) if np.ndim(r) == 0 else r

    @classmethod
    def constant(cls, r: float, k: int = 72) -> AzimuthPattern:
        return cls(np.full(k, float(r)))


def make_pattern(model: RadiusModel, k: int = 72, rng: np.random.Generator | None = None) -> AzimuthPattern:
    if k < 8:
        raise ValueError("need at least 8 azimuth samples")
    if rng is None:
        rng = np.random.default_rng()
    return AzimuthPattern([sample_radius(model, rng) for _ in range(k)])


@dataclass(frozen=True)
class ErrorModelParams:
    """Ground-distance error: rolling bias, altitude factor, ranging accuracy."""

    gamma_d: float = 1.2
    gamma_h: float = 0.2
    eps_s: float = 0.1

    def __post_init__(self):
        if min(self.gamma_d, self.gamma_h, self.eps_s) < 0:
            raise ValueError("error model parameters must be non-negative")

    @classmethod
    def zero(cls) -> ErrorModelParams:
        return cls(0.0, 0.0, 0.0)


def ground_error(r: float, h: float, params: ErrorModelParams, e_s: float) -> float:
    """Additive error on a ground distance ``r`` for an anchor at altitude ``h``."""
    ratio = h / r
    return params.gamma_d + ratio * params.gamma_h + e_s * math.sqrt(1.0 + ratio * ratio)


def perturb_ground_distance(r: float, h: float, params: ErrorModelParams, rng: np.random.Generator) -> float:
    if not r > 0:
        raise ValueError("ground distance must be positive")
    if h < 0:
        raise ValueError("altitude must be non-negative")
    e_s = float(rng.uniform(-params.eps_s, params.eps_s)) if params.eps_s > 0 else 0.0
    return r + ground_error(r, h, params, e_s)
