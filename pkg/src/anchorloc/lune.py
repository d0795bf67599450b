"""Closed-form vertices of the four-circle region used by Xiao-style estimates.

In the canonical frame the anchor moves along +x with the pre-arrival beacon
at the origin, the first heard beacon at ``(iw, 0)``, the last heard one at
``(k*iw, 0)`` and the post-departure beacon at ``((k+1)*iw, 0)``. With radius
``r1`` around the first two beacons and ``r2`` around the last two, the ground
device lies outside circle (0, r1), inside (iw, r1), inside (k*iw, r2) and
outside ((k+1)*iw, r2). The pairwise boundary crossings are

    A: (iw, r1)       x (k*iw, r2)
    B: (iw, r1)       x ((k+1)*iw, r2)
    C: (0, r1)        x ((k+1)*iw, r2)
    D: (0, r1)        x (k*iw, r2)

Only the upper half-plane vertex is returned; the lower region is the mirror
image across the x axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .geom import Frame, Point2D
from .mission import CrossingEvent


class NoVertices(ValueError):
    pass


class CurvatureCase(str, Enum):
    CONCORDANT = "concordant"
    PARALLEL = "parallel"
    DISCORDANT = "discordant"


@dataclass(frozen=True)
class CanonicalCrossing:
    r1: float
    r2: float
    k: int
    iw: float
    frame: Frame | None = None

    def __post_init__(self):
        if not (self.r1 > 0 and self.r2 > 0):
            raise ValueError("radii must be positive")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not self.iw > 0:
            raise ValueError("iw must be positive")

    def beacon(self, i: int) -> Point2D:
        return Point2D(i * self.iw, 0.0)

    def to_world(self, p: Point2D) -> Point2D:
        return p if self.frame is None else self.frame.to_world(p)

    def to_local(self, p: Point2D) -> Point2D:
        return p if self.frame is None else self.frame.to_local(p)


@dataclass(frozen=True)
class LuneVertices:
    A: Point2D | None
    B: Point2D | None
    C: Point2D | None
    D: Point2D | None

    def defined(self) -> list[Point2D]:
        return [p for p in (self.A, self.B, self.C, self.D) if p is not None]

    def as_dict(self) -> dict:
        return {name: (None if p is None else [p.x, p.y])
                for name, p in zip("ABCD", (self.A, self.B, self.C, self.D))}


def canonical_frame(e: CrossingEvent, r1: float | None = None, r2: float | None = None) -> CanonicalCrossing:
    """Canonical description of a crossing.

    Radii default to the event's measured ranges. ``k`` counts beacons so
    that the last heard one sits at ``k*iw``, i.e. one more than the number
    of intervals between the endpoints.
    """
    r1 = e.r1_meas if r1 is None else r1
    r2 = e.r2_meas if r2 is None else r2
    if r1 is None or r2 is None:
        raise ValueError("radii are required when the event carries no ranges")
    return CanonicalCrossing(r1=r1, r2=r2, k=e.n_intervals + 1, iw=e.iw, frame=Frame(e.a0, e.heading))


def _vertex(x: float, offset_num: float, denom: float, r1: float) -> Point2D | None:
    # offset_num / denom is the abscissa of the vertex relative to the r1 circle center
    u = offset_num / denom
    rad = r1 * r1 - u * u
    if rad < 0.0:
        return None
    return Point2D(x, math.sqrt(rad))


def intersection_points(c: CanonicalCrossing) -> LuneVertices:
    r1, r2, k, iw = c.r1, c.r2, c.k, c.iw
    delta = r1 * r1 - r2 * r2
    if k > 1:
        A = _vertex(delta / (2 * (k - 1) * iw) + (k + 1) / 2 * iw,
                    delta + (k - 1) ** 2 * iw * iw, 2 * (k - 1) * iw, r1)
    else:
        A = None
    B = _vertex(delta / (2 * k * iw) + (k + 2) / 2 * iw, delta + k * k * iw * iw, 2 * k * iw, r1)
    C = _vertex(delta / (2 * (k + 1) * iw) + (k + 1) / 2 * iw,
                delta + (k + 1) ** 2 * iw * iw, 2 * (k + 1) * iw, r1)
    D = _vertex(delta / (2 * k * iw) + k / 2 * iw, delta + k * k * iw * iw, 2 * k * iw, r1)
    v = LuneVertices(A, B, C, D)
    if not v.defined():
        raise NoVertices(f"no vertex for r1={r1}, r2={r2}, k={k}, iw={iw}")
    return v


def closest_beacon_index(c: CanonicalCrossing, gd: Point2D) -> int:
    """Index ``i`` of the beacon at ``i*iw`` nearest the device along the line."""
    return math.ceil(gd.x / c.iw)


def classify_case(c: CanonicalCrossing, gd_canonical: Point2D) -> CurvatureCase:
    """Curvature relation of the two lunes when the anchor stops at ``k``.

    A minimum at the first heard beacon itself (``k* == 1``) means the ranges
    only grow afterwards, which is treated as discordant.
    """
    k_star = closest_beacon_index(c, gd_canonical)
    if k_star < 1 or c.k < k_star:
        return CurvatureCase.CONCORDANT
    if c.k == k_star:
        return CurvatureCase.PARALLEL
    return CurvatureCase.DISCORDANT


def xc_approximation(c: CanonicalCrossing, x_A: float) -> float:
    if c.k < 2:
        raise ValueError("the approximation needs k >= 2")
    return (x_A + c.iw) * (c.k - 1) / (c.k + 1)
