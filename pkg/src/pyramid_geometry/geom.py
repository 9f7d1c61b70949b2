"""Plane Euclidean primitives for ruler-and-compass work.

Everything here is immutable and pure. Intersections honour an explicit
:class:`Tolerance`; near-tangent configurations collapse to a single point so
the number of returned points is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

TWO_PI = 2.0 * math.pi


class GeometryError(ValueError):
    pass


class DegenerateError(GeometryError):
    """Raised when an input collapses (coincident points, zero direction)."""


class CoincidentCirclesError(GeometryError):
    """Two identical circles: the intersection is the whole circle."""


@dataclass(frozen=True)
class Tolerance:
    absolute: float = 1e-9
    relative: float = 1e-12

    def __post_init__(self):
        if not (self.absolute > 0 and self.relative > 0):
            raise ValueError("tolerances must be strictly positive")

    def squared(self, scale: float = 1.0) -> float:
        """Threshold for squared-length quantities of magnitude ``scale**2``."""
        return max(self.absolute**2, self.relative * scale * scale)


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def __add__(self, other: Point) -> Point:
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point) -> Point:
        return Point(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> Point:
        return Point(self.x * k, self.y * k)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def distance_to(self, other: Point) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


ORIGIN = Point(0.0, 0.0)


def _cross(u: Point, v: Point) -> float:
    return u.x * v.y - u.y * v.x


def _dot(u: Point, v: Point) -> float:
    return u.x * v.x + u.y * v.y


def _rot90(u: Point) -> Point:
    return Point(-u.y, u.x)


@dataclass(frozen=True)
class Line:
    """Infinite line ``anchor + t * direction``; direction is normalised on construction."""

    anchor: Point
    direction: Point

    def __post_init__(self):
        n = self.direction.norm()
        if n < DEFAULT_TOLERANCE.absolute:
            raise DegenerateError("line direction has zero length")
        if n != 1.0:
            object.__setattr__(self, "direction", self.direction.scaled(1.0 / n))

    @classmethod
    def through(cls, p: Point, q: Point) -> Line:
        if p.distance_to(q) < DEFAULT_TOLERANCE.absolute:
            raise DegenerateError("line through coincident points")
        return cls(p, q - p)

    @classmethod
    def from_angle(cls, origin: Point, angle: Angle) -> Line:
        return cls(origin, Point(math.cos(angle.radians), math.sin(angle.radians)))

    def point_at(self, t: float) -> Point:
        return Point(self.anchor.x + t * self.direction.x, self.anchor.y + t * self.direction.y)

    def parameter_of(self, p: Point) -> float:
        return _dot(p - self.anchor, self.direction)

    def distance_to(self, p: Point) -> float:
        return abs(_cross(self.direction, p - self.anchor))


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise GeometryError(f"circle radius must be positive, got {self.radius}")

    def residual(self, p: Point) -> float:
        return abs(self.center.distance_to(p) - self.radius)


@dataclass(frozen=True, order=True)
class Angle:
    """An angle held in radians, normalised to [0, 2*pi)."""

    radians: float = field(default=0.0)

    def __post_init__(self):
        if not math.isfinite(self.radians):
            raise GeometryError("non-finite angle")
        r = math.fmod(self.radians, TWO_PI)
        if r < 0:
            r += TWO_PI
        if r >= TWO_PI:
            r = 0.0
        object.__setattr__(self, "radians", r)

    @classmethod
    def from_degrees(cls, deg: float) -> Angle:
        return cls(math.radians(deg))

    @property
    def degrees(self) -> float:
        return math.degrees(self.radians)

    def to_dms(self, places: int = 0) -> tuple[int, int, float]:
        return to_dms(self, places)

    def __str__(self):
        d, m, s = self.to_dms()
        return f"{d}°{m:02d}′{int(s):02d}″"


def dms(deg: int, minutes: int = 0, seconds: float = 0.0) -> Angle:
    """Build an angle from degrees, minutes and seconds of arc."""
    if int(deg) != deg or int(minutes) != minutes:
        raise GeometryError("degrees and minutes must be integers")
    if not 0 <= minutes < 60:
        raise GeometryError(f"minutes out of range: {minutes}")
    if not 0 <= seconds < 60:
        raise GeometryError(f"seconds out of range: {seconds}")
    return Angle.from_degrees(deg + minutes / 60.0 + seconds / 3600.0)


def to_dms(angle: Angle, places: int = 0) -> tuple[int, int, float]:
    """Inverse of :func:`dms`; seconds are rounded to ``places`` decimals with carry."""
    scale = 10**places
    units = round(angle.degrees * 3600 * scale)
    whole_seconds, frac = divmod(units, scale)
    deg, rest = divmod(whole_seconds, 3600)
    minutes, sec = divmod(rest, 60)
    seconds = sec + frac / scale
    return int(deg) % 360, int(minutes), (float(seconds) if places else int(seconds))


# --- constructions -----------------------------------------------------------


def distance(p: Point, q: Point) -> float:
    return p.distance_to(q)


def midpoint(p: Point, q: Point) -> Point:
    if p.distance_to(q) < DEFAULT_TOLERANCE.absolute:
        raise DegenerateError("midpoint of coincident points")
    return Point((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)


def perpendicular_at(line: Line, p: Point) -> Line:
    """Line through ``p`` perpendicular to ``line``."""
    return Line(p, _rot90(line.direction))


def perpendicular_bisector(p: Point, q: Point) -> Line:
    return Line(midpoint(p, q), _rot90(q - p))


def angle_at(vertex: Point, p: Point, q: Point) -> Angle:
    """Undirected angle pVq in [0, pi]."""
    u = p - vertex
    w = q - vertex
    if u.norm() < DEFAULT_TOLERANCE.absolute or w.norm() < DEFAULT_TOLERANCE.absolute:
        raise DegenerateError("angle with a side of zero length")
    return Angle(math.atan2(abs(_cross(u, w)), _dot(u, w)))


# --- intersections -----------------------------------------------------------


def intersect_line_line(a: Line, b: Line, tol: Tolerance = DEFAULT_TOLERANCE) -> Point | None:
    denom = _cross(a.direction, b.direction)
    if abs(denom) < tol.absolute:
        return None
    t = _cross(b.anchor - a.anchor, b.direction) / denom
    return a.point_at(t)


def intersect_line_circle(line: Line, circle: Circle, tol: Tolerance = DEFAULT_TOLERANCE) -> list[Point]:
    """Points ordered by increasing parameter along ``line``."""
    t0 = line.parameter_of(circle.center)
    foot = line.point_at(t0)
    d2 = (circle.center - foot).norm() ** 2
    disc = circle.radius**2 - d2
    eps = tol.squared(circle.radius)
    if disc < -eps:
        return []
    if disc <= eps:
        return [foot]
    h = math.sqrt(disc)
    return [line.point_at(t0 - h), line.point_at(t0 + h)]


def intersect_circle_circle(a: Circle, b: Circle, tol: Tolerance = DEFAULT_TOLERANCE) -> list[Point]:
    """Intersection points; with two, the one right of the centre line a->b comes first."""
    delta = b.center - a.center
    d = delta.norm()
    if d < tol.absolute:
        if abs(a.radius - b.radius) < tol.absolute:
            raise CoincidentCirclesError("coincident circles intersect everywhere")
        return []
    along = (d * d + a.radius**2 - b.radius**2) / (2.0 * d)
    h2 = a.radius**2 - along * along
    eps = tol.squared(max(a.radius, b.radius))
    if h2 < -eps:
        return []
    u = delta.scaled(1.0 / d)
    base = a.center + u.scaled(along)
    if h2 <= eps:
        return [base]
    n = _rot90(u).scaled(math.sqrt(h2))
    return [base - n, base + n]


def intersect(a, b, tol: Tolerance = DEFAULT_TOLERANCE) -> list[Point]:
    """Dispatch on locus types; always returns a list."""
    if isinstance(a, Line) and isinstance(b, Line):
        p = intersect_line_line(a, b, tol)
        return [] if p is None else [p]
    if isinstance(a, Line) and isinstance(b, Circle):
        return intersect_line_circle(a, b, tol)
    if isinstance(a, Circle) and isinstance(b, Line):
        return intersect_line_circle(b, a, tol)
    if isinstance(a, Circle) and isinstance(b, Circle):
        return intersect_circle_circle(a, b, tol)
    raise TypeError(f"cannot intersect {type(a).__name__} with {type(b).__name__}")
