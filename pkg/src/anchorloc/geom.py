"""Planar geometry primitives shared by the localization algorithms.

Everything here is pure and works in a local Cartesian frame (meters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

PARALLEL_TOL = 1e-9
DEGENERATE_TOL = 1e-9


class GeometryError(ValueError):
    pass


class DegenerateChord(GeometryError):
    pass


class ParallelLines(GeometryError):
    pass


class NoIntersection(GeometryError):
    pass


class EmptyInput(GeometryError):
    pass


class DegenerateTriangle(GeometryError):
    pass


@dataclass(frozen=True, slots=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def __add__(self, other: Point2D) -> Point2D:
        return Point2D(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2D) -> Point2D:
        return Point2D(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> Point2D:
        return Point2D(self.x * s, self.y * s)

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True, slots=True)
class Line2D:
    point: Point2D
    direction: tuple[float, float]

    def __post_init__(self):
        dx, dy = self.direction
        if abs(dx * dx + dy * dy - 1.0) > 1e-12:
            raise ValueError("Line2D direction must be a unit vector")


@dataclass(frozen=True, slots=True)
class Circle:
    center: Point2D
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")


def distance(p: Point2D, q: Point2D) -> float:
    return math.hypot(q.x - p.x, q.y - p.y)


def cross(u: tuple[float, float], v: tuple[float, float]) -> float:
    return u[0] * v[1] - u[1] * v[0]


def unit(dx: float, dy: float) -> tuple[float, float]:
    n = math.hypot(dx, dy)
    return (dx / n, dy / n)


def perp_bisector(p: Point2D, q: Point2D) -> Line2D:
    """Perpendicular bisector of the chord ``pq``.

    The direction is the chord direction rotated by +90 degrees.
    """
    d = distance(p, q)
    if d < DEGENERATE_TOL:
        raise DegenerateChord(f"chord endpoints coincide: {p}, {q}")
    ux, uy = (q.x - p.x) / d, (q.y - p.y) / d
    mid = Point2D(0.5 * (p.x + q.x), 0.5 * (p.y + q.y))
    return Line2D(mid, (-uy, ux))


def line_intersect(l1: Line2D, l2: Line2D) -> Point2D:
    d1, d2 = l1.direction, l2.direction
    denom = cross(d1, d2)
    if abs(denom) < PARALLEL_TOL:
        raise ParallelLines("lines are parallel")
    w = (l2.point.x - l1.point.x, l2.point.y - l1.point.y)
    t = cross(w, d2) / denom
    return Point2D(l1.point.x + t * d1[0], l1.point.y + t * d1[1])


def circle_circle_intersect(c1: Circle, c2: Circle) -> list[Point2D]:
    """Intersection points of two circles.

    Returns one point for tangent circles and two otherwise; with two points
    the one on the left of the directed line ``c1.center -> c2.center`` comes
    first.
    """
    dx = c2.center.x - c1.center.x
    dy = c2.center.y - c1.center.y
    d = math.hypot(dx, dy)
    r1, r2 = c1.radius, c2.radius
    if d < DEGENERATE_TOL or d > r1 + r2 or d < abs(r1 - r2):
        raise NoIntersection(f"circles do not intersect (d={d:.6g}, r1={r1:.6g}, r2={r2:.6g})")
    # a: signed distance from c1 to the radical line along the center line
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - a * a
    ux, uy = dx / d, dy / d
    bx, by = c1.center.x + a * ux, c1.center.y + a * uy
    if h2 <= 0.0:
        return [Point2D(bx, by)]
    h = math.sqrt(h2)
    return [Point2D(bx - h * uy, by + h * ux), Point2D(bx + h * uy, by - h * ux)]


def centroid(pts: Sequence[Point2D]) -> Point2D:
    if len(pts) == 0:
        raise EmptyInput("centroid of an empty point set")
    n = len(pts)
    return Point2D(sum(p.x for p in pts) / n, sum(p.y for p in pts) / n)


def _angle_at(apex: Point2D, p: Point2D, q: Point2D) -> float:
    ux, uy = p.x - apex.x, p.y - apex.y
    vx, vy = q.x - apex.x, q.y - apex.y
    return math.degrees(math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy))


def triangle_angles(b1: Point2D, b2: Point2D, b3: Point2D) -> tuple[float, float, float]:
    """Interior angles (degrees) at b1, b2 and b3."""
    for p, q in ((b1, b2), (b2, b3), (b3, b1)):
        if distance(p, q) < DEGENERATE_TOL:
            raise DegenerateTriangle(f"coincident vertices {p}, {q}")
    a1 = _angle_at(b1, b3, b2)
    a2 = _angle_at(b2, b1, b3)
    # the third angle by subtraction keeps the sum at exactly 180
    return (a1, a2, 180.0 - a1 - a2)


@dataclass(frozen=True, slots=True)
class Frame:
    """Rigid transform from world coordinates into a local frame.

    The local frame has its origin at ``origin`` and +x along ``heading``.
    """

    origin: Point2D
    heading: tuple[float, float]

    def to_local(self, p: Point2D) -> Point2D:
        dx, dy = p.x - self.origin.x, p.y - self.origin.y
        c, s = self.heading
        return Point2D(c * dx + s * dy, -s * dx + c * dy)

    def to_world(self, p: Point2D) -> Point2D:
        c, s = self.heading
        return Point2D(self.origin.x + c * p.x - s * p.y, self.origin.y + s * p.x + c * p.y)
