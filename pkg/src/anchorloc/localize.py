"""Range-free localization algorithms (DRF, Xiao, Lee, DrfE) and their
range-based variants.

Radius-based algorithms build two mirror-image candidate regions, one on each
side of the chord, and pick a side with a third known point. The left side
(with respect to the anchor heading) is always the first candidate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import lune
from .antenna import MANUFACTURER_RADIUS_M
from .geom import (
    Circle,
    DegenerateChord,
    NoIntersection,
    ParallelLines,
    Point2D,
    centroid,
    circle_circle_intersect,
    distance,
    line_intersect,
    perp_bisector,
)
from .mission import CrossingEvent

INSIDE_TOL = 1e-9


class RadiusKindMode(str, Enum):
    OBSERVED = "observed"
    MANUFACTURER = "manufacturer"
    MEASURED = "measured"


@dataclass(frozen=True)
class RadiusMode:
    kind: RadiusKindMode
    radius: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", RadiusKindMode(self.kind))
        if self.kind is not RadiusKindMode.MEASURED and not (self.radius and self.radius > 0):
            raise ValueError(f"{self.kind.value} mode needs a positive radius")

    @classmethod
    def observed(cls, mu: float) -> RadiusMode:
        return cls(RadiusKindMode.OBSERVED, mu)

    @classmethod
    def manufacturer(cls, r0: float = MANUFACTURER_RADIUS_M) -> RadiusMode:
        return cls(RadiusKindMode.MANUFACTURER, r0)

    @classmethod
    def measured(cls) -> RadiusMode:
        return cls(RadiusKindMode.MEASURED)

    @property
    def is_measured(self) -> bool:
        return self.kind is RadiusKindMode.MEASURED


class Unlocalized(str, Enum):
    PARALLEL_CHORDS = "ParallelChords"
    EMPTY_REGION = "EmptyRegion"
    RETRY_EXHAUSTED = "RetryExhausted"


@dataclass(frozen=True)
class LocalizationOutcome:
    estimate: Point2D | None = None
    reason: Unlocalized | None = None

    @property
    def localized(self) -> bool:
        return self.estimate is not None

    def error(self, truth: Point2D) -> float | None:
        return None if self.estimate is None else distance(self.estimate, truth)


def _fail(reason: Unlocalized) -> LocalizationOutcome:
    return LocalizationOutcome(None, reason)


def _side(e: CrossingEvent, p: Point2D) -> float:
    """Positive when ``p`` is left of the anchor heading."""
    hx, hy = e.heading
    return hx * (p.y - e.a1.y) - hy * (p.x - e.a1.x)


def _radii(e: CrossingEvent, r: RadiusMode, pad: float) -> tuple[float, float]:
    if r.is_measured:
        if not e.has_ranges:
            raise ValueError("measured mode needs crossings with ranges")
        return e.r1_meas + pad, e.r2_meas + pad
    return r.radius, r.radius


def _reference(r: RadiusMode, third_range: float | None) -> float:
    if r.is_measured:
        if third_range is None:
            raise ValueError("measured mode needs the range to the third point")
        return third_range
    return r.radius


def disambiguate(candidates: list[Point2D], third: Point2D, rho: float) -> Point2D:
    """The candidate whose distance to ``third`` is closest to ``rho``.

    Ties go to the first candidate.
    """
    best, best_gap = None, math.inf
    for c in candidates:
        gap = abs(distance(c, third) - rho)
        if gap < best_gap:
            best, best_gap = c, gap
    return best


def _pick(left: Point2D | None, right: Point2D | None, third: Point2D, rho: float) -> LocalizationOutcome:
    cands = [p for p in (left, right) if p is not None]
    if not cands:
        return _fail(Unlocalized.EMPTY_REGION)
    return LocalizationOutcome(disambiguate(cands, third, rho))


def drf(e1: CrossingEvent, e2: CrossingEvent, e3: CrossingEvent | None = None) -> LocalizationOutcome:
    """Radius-free estimate: intersection of the perpendicular bisectors of two chords.

    Without ``e3`` the chords are the ones traversed in ``e1`` and ``e2``.
    With ``e3`` they join the first heard beacons, ``e1.a1``-``e2.a1`` and
    ``e2.a1``-``e3.a1``, so the estimate is the circumcenter of those points.
    """
    if e3 is None:
        c1, c2 = (e1.a1, e1.a2), (e2.a1, e2.a2)
    else:
        c1, c2 = (e1.a1, e2.a1), (e2.a1, e3.a1)
    try:
        est = line_intersect(perp_bisector(*c1), perp_bisector(*c2))
    except (ParallelLines, DegenerateChord):
        return _fail(Unlocalized.PARALLEL_CHORDS)
    return LocalizationOutcome(est)


def xiao(e1: CrossingEvent, third: Point2D, r: RadiusMode, third_range: float | None = None) -> LocalizationOutcome:
    """Center of the region left by the four circles around ``a0..a3``.

    The center is the centroid of whichever vertices A, B, C, D exist. In
    measured mode each radius is the range plus ``iw/2``.
    """
    r1, r2 = _radii(e1, r, 0.5 * e1.iw)
    c = lune.canonical_frame(e1, r1, r2)
    try:
        v = lune.intersection_points(c)
    except lune.NoVertices:
        return _fail(Unlocalized.EMPTY_REGION)
    up = centroid(v.defined())
    left = c.to_world(up)
    right = c.to_world(Point2D(up.x, -up.y))
    return _pick(left, right, third, _reference(r, third_range))


def _inside_annulus(p: Point2D, center: Point2D, inner: float, outer: float) -> bool:
    d = distance(p, center)
    return inner - INSIDE_TOL <= d <= outer + INSIDE_TOL


def lee(e1: CrossingEvent, third: Point2D, r: RadiusMode, third_range: float | None = None) -> LocalizationOutcome:
    """Center of the intersection of two annuli of width ``iw`` around the endpoints.

    The center is the centroid of the pairwise circle crossings that lie in
    both annuli, split by side of the chord.
    """
    o1, o2 = _radii(e1, r, 0.5 * e1.iw)
    i1, i2 = o1 - e1.iw, o2 - e1.iw
    if i1 <= 0 or i2 <= 0:
        return _fail(Unlocalized.EMPTY_REGION)
    sides: tuple[list[Point2D], list[Point2D]] = ([], [])
    for ra in (o1, i1):
        for rb in (o2, i2):
            try:
                pts = circle_circle_intersect(Circle(e1.a1, ra), Circle(e1.a2, rb))
            except NoIntersection:
                continue
            for p in pts:
                if _inside_annulus(p, e1.a1, i1, o1) and _inside_annulus(p, e1.a2, i2, o2):
                    s = _side(e1, p)
                    if s >= 0:
                        sides[0].append(p)
                    if s <= 0:
                        sides[1].append(p)
    left = centroid(sides[0]) if sides[0] else None
    right = centroid(sides[1]) if sides[1] else None
    return _pick(left, right, third, _reference(r, third_range))


def drfe(e1: CrossingEvent, third: Point2D, r: RadiusMode, third_range: float | None = None) -> LocalizationOutcome:
    """Centroid of the apexes built on chords a1a2, a1a3 and a0a2.

    With a nominal radius the apexes are isosceles; with measured ranges the
    first-heard range is used around a0/a1 and the last-heard one around a2/a3.
    """
    r1, r2 = _radii(e1, r, 0.0)
    pairs = ((e1.a1, e1.a2), (e1.a1, e1.a3), (e1.a0, e1.a2))
    left, right = [], []
    for p, q in pairs:
        try:
            pts = circle_circle_intersect(Circle(p, r1), Circle(q, r2))
        except NoIntersection:
            return _fail(Unlocalized.EMPTY_REGION)
        left.append(pts[0])
        right.append(pts[-1])
    return _pick(centroid(left), centroid(right), third, _reference(r, third_range))


RF_ALGORITHMS = ("DRF", "Xiao", "Lee", "DrfE")
RB_ALGORITHMS = ("RB-Xiao", "RB-Lee", "RB-DrfE")
GEOMETRIES = ("endpoints", "crossing")


def endpoint_chord(e1: CrossingEvent, e2: CrossingEvent) -> CrossingEvent:
    """Virtual crossing along the chord from ``e1.a1`` to ``e2.a1``.

    Both points lie on the receiving boundary, so the chord can stand in for
    a traversal; the flanking beacons are placed ``iw`` beyond each end and
    the measured ranges (if any) are the first-heard ranges of each event.
    """
    return CrossingEvent.from_endpoints(e1.a1, e2.a1, e1.iw, e1.r1_meas, e2.r1_meas)


def run_all(e1: CrossingEvent, e2: CrossingEvent, e3: CrossingEvent, r: RadiusMode,
            geometry: str = "endpoints") -> dict[str, LocalizationOutcome]:
    """Every applicable algorithm on the same three crossings.

    ``geometry="endpoints"`` treats the three first heard beacons as the
    known boundary points: DRF takes their circumcenter and the radius-based
    algorithms work on the chord between the first two. ``"crossing"`` runs
    the radius-based algorithms on the traversal ``e1`` itself and DRF on the
    chords of ``e1`` and ``e2``. Either way ``e3.a1`` picks the side.
    """
    if geometry not in GEOMETRIES:
        raise ValueError(f"geometry must be one of {GEOMETRIES}, got {geometry!r}")
    if geometry == "endpoints":
        chord, drf_out = endpoint_chord(e1, e2), drf(e1, e2, e3)
    else:
        chord, drf_out = e1, drf(e1, e2)
    third = e3.a1
    if r.is_measured:
        rho = e3.r1_meas
        return {
            "RB-Xiao": xiao(chord, third, r, rho),
            "RB-Lee": lee(chord, third, r, rho),
            "RB-DrfE": drfe(chord, third, r, rho),
        }
    return {
        "DRF": drf_out,
        "Xiao": xiao(chord, third, r),
        "Lee": lee(chord, third, r),
        "DrfE": drfe(chord, third, r),
    }
