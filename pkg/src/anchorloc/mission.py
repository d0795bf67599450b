"""Anchor missions, heard/not-heard crossing detection and triple selection.

A crossing is what the ground device learns when the anchor passes through
its receiving area along a straight segment: the first and last heard
beacons (``a1``, ``a2``) and the not-heard beacons right before and after
them (``a0``, ``a3``), all ``iw`` apart along the heading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .antenna import (
    AzimuthPattern,
    ErrorModelParams,
    RadiusModel,
    perturb_ground_distance,
    sample_radius,
)
from .geom import DegenerateTriangle, Point2D, distance, triangle_angles

DEFAULT_IW_M = 0.40
SYNTH_MAX_DRAWS = 100


class RetryExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class MissionPath:
    waypoints: tuple[Point2D, ...]
    altitude: float = 0.0

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ValueError("a mission needs at least two waypoints")
        for p, q in zip(self.waypoints, self.waypoints[1:]):
            if distance(p, q) == 0.0:
                raise ValueError("consecutive waypoints must be distinct")

    @property
    def segments(self) -> list[tuple[Point2D, Point2D]]:
        return list(zip(self.waypoints, self.waypoints[1:]))


@dataclass(frozen=True)
class CrossingEvent:
    a0: Point2D
    a1: Point2D
    a2: Point2D
    a3: Point2D
    heading: tuple[float, float]
    iw: float
    r1_meas: float | None = None
    r2_meas: float | None = None

    @classmethod
    def from_endpoints(cls, a1: Point2D, a2: Point2D, iw: float,
                       r1_meas: float | None = None, r2_meas: float | None = None) -> CrossingEvent:
        """Rebuild the pre-arrival and post-departure beacons from the endpoints."""
        d = distance(a1, a2)
        if d == 0.0:
            raise ValueError("endpoints coincide; the heading is undefined")
        hx, hy = (a2.x - a1.x) / d, (a2.y - a1.y) / d
        return cls(
            a0=Point2D(a1.x - iw * hx, a1.y - iw * hy),
            a1=a1,
            a2=a2,
            a3=Point2D(a2.x + iw * hx, a2.y + iw * hy),
            heading=(hx, hy),
            iw=iw,
            r1_meas=r1_meas,
            r2_meas=r2_meas,
        )

    @property
    def chord_length(self) -> float:
        return distance(self.a1, self.a2)

    @property
    def n_intervals(self) -> int:
        """Number of beacon intervals between ``a1`` and ``a2``."""
        return int(round(self.chord_length / self.iw))

    @property
    def has_ranges(self) -> bool:
        return self.r1_meas is not None and self.r2_meas is not None

    def check(self, tol: float = 1e-9) -> None:
        """Raise ``ValueError`` if the beacon geometry is inconsistent."""
        hx, hy = self.heading
        if abs(hx * hx + hy * hy - 1.0) > 1e-12:
            raise ValueError("heading is not a unit vector")
        for p in (self.a1, self.a2, self.a3):
            dx, dy = p.x - self.a0.x, p.y - self.a0.y
            if abs(dx * hy - dy * hx) > tol:
                raise ValueError("beacons are not collinear along the heading")
        if abs(distance(self.a0, self.a1) - self.iw) > tol or abs(distance(self.a2, self.a3) - self.iw) > tol:
            raise ValueError("flanking beacons are not iw away from the endpoints")
        k = self.chord_length / self.iw
        if round(k) < 1 or abs(k - round(k)) * self.iw > tol:
            raise ValueError(f"chord length is not a positive multiple of iw (k={k})")

    def to_dict(self) -> dict:
        d = {
            "a0": list(self.a0.as_tuple()),
            "a1": list(self.a1.as_tuple()),
            "a2": list(self.a2.as_tuple()),
            "a3": list(self.a3.as_tuple()),
            "heading": list(self.heading),
            "iw": self.iw,
        }
        if self.has_ranges:
            d["r1_meas"] = self.r1_meas
            d["r2_meas"] = self.r2_meas
        return d

    @classmethod
    def from_dict(cls, d: dict) -> CrossingEvent:
        """Accepts either the full four-beacon form or just ``a1``, ``a2``, ``iw``."""
        iw = float(d["iw"])
        r1, r2 = d.get("r1_meas"), d.get("r2_meas")
        r1 = None if r1 is None else float(r1)
        r2 = None if r2 is None else float(r2)
        a1, a2 = Point2D(*map(float, d["a1"])), Point2D(*map(float, d["a2"]))
        if "a0" not in d:
            return cls.from_endpoints(a1, a2, iw, r1, r2)
        return cls(
            a0=Point2D(*map(float, d["a0"])),
            a1=a1,
            a2=a2,
            a3=Point2D(*map(float, d["a3"])),
            heading=tuple(map(float, d["heading"])) if "heading" in d else CrossingEvent.from_endpoints(a1, a2, iw).heading,
            iw=iw,
            r1_meas=r1,
            r2_meas=r2,
        )


@dataclass(frozen=True)
class TripleConstraints:
    r_min: float = 60.0
    alpha_min: float = 20.0

    def __post_init__(self):
        if self.r_min < 0:
            raise ValueError("r_min must be non-negative")
        if not 0.0 <= self.alpha_min <= 60.0:
            raise ValueError("alpha_min must lie in [0, 60] degrees")

    def accepts(self, b1: Point2D, b2: Point2D, b3: Point2D) -> bool:
        if min(distance(b1, b2), distance(b2, b3), distance(b3, b1)) < self.r_min:
            return False
        try:
            angles = triangle_angles(b1, b2, b3)
        except DegenerateTriangle:
            return False
        return min(angles) >= self.alpha_min


def generate_path(n: int, area: tuple[float, float, float, float], rng: np.random.Generator,
                  altitude: float = 0.0) -> MissionPath:
    """``n`` segments through ``n + 1`` uniform random points in ``area``.

    ``area`` is ``(xmin, ymin, xmax, ymax)``.
    """
    if n < 1:
        raise ValueError("a mission needs at least one segment")
    xmin, ymin, xmax, ymax = area
    if not (xmax > xmin and ymax > ymin):
        raise ValueError(f"empty deployment area {area}")
    xs = rng.uniform(xmin, xmax, n + 1)
    ys = rng.uniform(ymin, ymax, n + 1)
    return MissionPath(tuple(Point2D(float(x), float(y)) for x, y in zip(xs, ys)), altitude)


def _ranges(rb_mode: bool, d1: float, d2: float, h: float, error: ErrorModelParams | None,
            rng: np.random.Generator) -> tuple[float | None, float | None]:
    if not rb_mode:
        return None, None
    error = error or ErrorModelParams()
    return (perturb_ground_distance(d1, h, error, rng), perturb_ground_distance(d2, h, error, rng))


def detect_crossings(path: MissionPath, pattern: AzimuthPattern, gd: Point2D, iw: float = DEFAULT_IW_M,
                     rb_mode: bool = False, error: ErrorModelParams | None = None,
                     rng: np.random.Generator | None = None) -> list[CrossingEvent]:
    """Heard/not-heard crossings of ``gd``'s receiving pattern along ``path``.

    Beacons are emitted every ``iw`` from the first endpoint of each segment.
    Every maximal run of at least two heard beacons that is flanked by a
    not-heard beacon on both sides, inside the same segment, is a crossing.
    """
    if not iw > 0:
        raise ValueError("iw must be positive")
    if rb_mode and rng is None:
        raise ValueError("rb_mode needs an rng for the ranging error")
    events = []
    for p, q in path.segments:
        length = distance(p, q)
        ux, uy = (q.x - p.x) / length, (q.y - p.y) / length
        s = np.arange(int(math.floor(length / iw + 1e-12)) + 1) * iw
        bx, by = p.x + s * ux, p.y + s * uy
        rx, ry = bx - gd.x, by - gd.y
        dist = np.hypot(rx, ry)
        heard = dist <= pattern.radius(np.arctan2(ry, rx))
        edges = np.diff(np.concatenate(([0], heard.astype(np.int8), [0])))
        starts = np.flatnonzero(edges == 1)
        stops = np.flatnonzero(edges == -1) - 1
        for i, j in zip(starts, stops):
            if j - i < 1 or i == 0 or j == len(s) - 1:
                continue
            r1, r2 = _ranges(rb_mode, float(dist[i]), float(dist[j]), path.altitude, error, rng)
            events.append(CrossingEvent(
                a0=Point2D(float(bx[i - 1]), float(by[i - 1])),
                a1=Point2D(float(bx[i]), float(by[i])),
                a2=Point2D(float(bx[j]), float(by[j])),
                a3=Point2D(float(bx[j + 1]), float(by[j + 1])),
                heading=(ux, uy),
                iw=iw,
                r1_meas=r1,
                r2_meas=r2,
            ))
    return events


def _exit_along_ray(pattern: AzimuthPattern, gd: Point2D, start: Point2D, heading: tuple[float, float],
                    step: float, t_max: float) -> float | None:
    """Distance along the ray from ``start`` to where it first leaves the pattern."""
    hx, hy = heading
    ts = np.arange(step, t_max + step, step)
    rx, ry = start.x + ts * hx - gd.x, start.y + ts * hy - gd.y
    outside = np.hypot(rx, ry) > pattern.radius(np.arctan2(ry, rx))
    idx = np.flatnonzero(outside)
    if len(idx) == 0:
        return None
    hi = float(ts[idx[0]])
    lo = hi - step
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        mx, my = start.x + mid * hx - gd.x, start.y + mid * hy - gd.y
        if math.hypot(mx, my) > pattern.radius(math.atan2(my, mx)):
            hi = mid
        else:
            lo = mid
    return lo


def synth_crossing(model: RadiusModel, gd: Point2D, iw: float, rb_mode: bool = False, h: float = 0.0,
                   error: ErrorModelParams | None = None, rng: np.random.Generator | None = None, *,
                   pattern: AzimuthPattern | None = None, phase: float | None = None,
                   inward_angle: float | None = None) -> CrossingEvent:
    """Draw one synthetic crossing without simulating a whole mission.

    An entry radius and an exit radius are drawn from ``model`` (or read off
    ``pattern`` when one is shared across crossings). The anchor enters at a
    uniform azimuth with a heading uniformly spread over the inward half-plane
    and leaves where the ray meets the exit circle. Headings that miss the
    exit circle are redrawn together with the exit radius; the entry stays. A beacon phase uniform in
    ``[0, iw)`` then quantizes the chord into beacons.

    ``phase`` and ``inward_angle`` (heading angle from the direction towards
    ``gd``, radians) pin those draws, which is handy in tests.
    """
    if rng is None:
        rng = np.random.default_rng()
    # the entry point is drawn once so that first-heard distances follow the model
    theta = float(rng.uniform(0.0, 2.0 * math.pi))
    r_a = pattern.radius(theta) if pattern is not None else sample_radius(model, rng)
    wx, wy = r_a * math.cos(theta), r_a * math.sin(theta)
    entry = Point2D(gd.x + wx, gd.y + wy)
    for _ in range(SYNTH_MAX_DRAWS):
        off = inward_angle if inward_angle is not None else float(rng.uniform(-0.5 * math.pi, 0.5 * math.pi))
        psi = theta + math.pi + off
        hx, hy = math.cos(psi), math.sin(psi)
        if pattern is not None:
            chord = _exit_along_ray(pattern, gd, entry, (hx, hy), 0.5 * iw, 2.0 * float(pattern.samples.max()) + iw)
            if chord is None:
                continue
        else:
            r_b = sample_radius(model, rng)
            b = wx * hx + wy * hy
            disc = b * b - (r_a * r_a - r_b * r_b)
            if disc < 0:
                continue
            chord = -b + math.sqrt(disc)
        u = phase if phase is not None else float(rng.uniform(0.0, iw))
        s1 = 0.0 if u == 0.0 else iw - u
        n = int(math.floor((chord - s1) / iw + 1e-12))
        if n < 1:
            continue
        a1 = Point2D(entry.x + s1 * hx, entry.y + s1 * hy)
        a2 = Point2D(a1.x + n * iw * hx, a1.y + n * iw * hy)
        r1, r2 = _ranges(rb_mode, distance(a1, gd), distance(a2, gd), h, error, rng)
        return CrossingEvent(
            a0=Point2D(a1.x - iw * hx, a1.y - iw * hy),
            a1=a1,
            a2=a2,
            a3=Point2D(a2.x + iw * hx, a2.y + iw * hy),
            heading=(hx, hy),
            iw=iw,
            r1_meas=r1,
            r2_meas=r2,
        )
    raise RetryExhausted(f"no valid chord after {SYNTH_MAX_DRAWS} draws")


def select_triple(events: Iterable[CrossingEvent], c: TripleConstraints,
                  max_attempts: int = 1000) -> tuple[CrossingEvent, CrossingEvent, CrossingEvent]:
    """Take crossings three at a time until their first-heard endpoints fit ``c``."""
    if max_attempts < 1:
        raise ValueError("max_attempts must be at least 1")
    it: Iterator[CrossingEvent] = iter(events)
    for _ in range(max_attempts):
        try:
            triple = (next(it), next(it), next(it))
        except StopIteration:
            break
        if c.accepts(triple[0].a1, triple[1].a1, triple[2].a1):
            return triple
    raise RetryExhausted(f"no triple satisfied r_min={c.r_min}, alpha_min={c.alpha_min}")
