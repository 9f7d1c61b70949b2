"""The three classical problems plus consecutive-leg right triangles.

Sphere metrics, cube duplication and sphere cubature are closed forms. The
trisector is an iterative ruler-and-compass procedure built from
:mod:`pyramid_geometry.geom` primitives; its fixed point is Archimedes'
neusis configuration, which :func:`archimedes_limit_check` verifies.

The Greek conchoid solution of the trisection is not implemented.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels
from .geom import (
    Angle,
    Circle,
    Line,
    Point,
    angle_at,
    intersect_line_circle,
    intersect_line_line,
    midpoint,
    perpendicular_bisector,
)


def _require_positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be positive, got {value!r}")


# --- spheres, cubes ------------------------------------------------------------


@dataclass(frozen=True)
class SphereMetrics:
    radius: float
    circumference: float
    area: float
    volume: float


def sphere_metrics(radius: float) -> SphereMetrics:
    _require_positive("radius", radius)
    return SphereMetrics(
        radius=radius,
        circumference=2.0 * math.pi * radius,
        area=4.0 * math.pi * radius**2,
        volume=4.0 * math.pi * radius**3 / 3.0,
    )


class DuplicationCheck(NamedTuple):
    ratio: float
    rel_err_vs_2: float


def duplication_check(edge_small: float, edge_large: float) -> DuplicationCheck:
    """How close the cube on ``edge_large`` comes to doubling the cube on ``edge_small``."""
    _require_positive("edge_small", edge_small)
    _require_positive("edge_large", edge_large)
    ratio = (edge_large / edge_small) ** 3
    return DuplicationCheck(ratio, abs(ratio - 2.0) / 2.0)


def cubature_radius_exact(edge: float) -> float:
    """Radius of the sphere whose volume equals the cube on ``edge``."""
    _require_positive("edge", edge)
    return edge * (3.0 / (4.0 * math.pi)) ** (1.0 / 3.0)


class EgyptianCubature(NamedTuple):
    r: float
    rel_err_vs_exact: float
    volume_rel_err: float


def cubature_radius_egyptian() -> EgyptianCubature:
    # half the 100-unit satellite base, scaled by 280/226
    r = 50.0 * 280.0 / 226.0
    exact = cubature_radius_exact(100.0)
    volume = sphere_metrics(r).volume
    return EgyptianCubature(r, abs(r - exact) / exact, abs(volume - 1e6) / 1e6)


# --- iterative trisection -------------------------------------------------------


@dataclass(frozen=True)
class TrisectionRow:
    label: str
    ix: float
    cx: float
    height_t: float
    proj_at: float
    third_deg: float


@dataclass(frozen=True)
class TrisectionTrace:
    theta: Angle
    unit: float
    rows: tuple[TrisectionRow, ...]
    converged: bool
    final_third: Angle = field(compare=False)

    def to_dict(self) -> dict:
        """JSON-ready form; angles are given in decimal degrees."""
        return {
            "theta": self.theta.degrees,
            "unit": self.unit,
            "rows": [asdict(r) for r in self.rows],
            "converged": self.converged,
            "final_third": self.final_third.degrees,
        }


@dataclass(frozen=True)
class _Frame:
    """The fixed scaffold of the construction for a given angle and unit."""

    c: Point
    a: Point
    i: Point
    bisector: Line
    ck: Line

    @classmethod
    def build(cls, theta: Angle, unit: float) -> _Frame:
        c = Point(0.0, 0.0)
        a = Point(-unit, 0.0)
        return cls(c, a, midpoint(a, c), perpendicular_bisector(a, c), Line.from_angle(c, theta))

    def carry(self, length: float) -> Point:
        """Lay ``length`` off from C along CK (forward side)."""
        return intersect_line_circle(self.ck, Circle(self.c, length))[-1]

    def cut(self, t: Point) -> Point:
        """Where line A-T crosses the perpendicular bisector of AC."""
        x = intersect_line_line(Line.through(self.a, t), self.bisector)
        if x is None:  # pragma: no cover - A-T is never parallel to IG for 0 < theta < 180
            raise ArithmeticError("A-T is parallel to the bisector")
        return x


def _as_angle(theta) -> Angle:
    return theta if isinstance(theta, Angle) else Angle.from_degrees(float(theta))


def _check_theta(theta: Angle) -> None:
    if not 0.0 < theta.degrees < 180.0:
        raise ValueError(f"angle to trisect must lie in (0, 180) degrees, got {theta.degrees}")


def trisect_iterative(
    theta,
    unit: float = 100.0,
    eps_deg: float = 1e-7,
    max_iter: int = 100,
    *,
    stop_early: bool = True,
) -> TrisectionTrace:
    """Approximate theta/3 by repeatedly carrying CX onto CK.

    C sits at the origin with the angle's base along +x, A at (-unit, 0) and
    the perpendicular bisector of AC at x = -unit/2. Row ``S`` uses
    CT = unit/2; every later row carries the previous CX onto CK. The
    third-angle estimate is the inclination of A-T.

    With ``stop_early`` the loop ends once consecutive estimates differ by
    less than ``eps_deg``; without it exactly ``max_iter`` iterations run
    (the fixed-length table mode). ``converged`` records whether the last
    step was below ``eps_deg`` either way.

    ``theta`` may be an :class:`Angle` or decimal degrees.
    """
    theta = _as_angle(theta)
    _check_theta(theta)
    _require_positive("unit", unit)
    _require_positive("eps_deg", eps_deg)
    if max_iter < 0:
        raise ValueError("max_iter must be non-negative")

    f = _Frame.build(theta, unit)

    def row(label: str, ix: float, t: Point) -> TrisectionRow:
        third = angle_at(f.a, f.c, t).degrees
        return TrisectionRow(label, ix, f.c.distance_to(t), t.y, t.x - f.a.x, third)

    t = f.carry(unit / 2.0)
    rows = [row("S", 0.0, t)]
    step = math.inf
    for n in range(1, max_iter + 1):
        x = f.cut(t)
        t = f.carry(f.c.distance_to(x))
        rows.append(row(f"T{n}", f.i.distance_to(x), t))
        step = abs(rows[-1].third_deg - rows[-2].third_deg)
        if stop_early and step < eps_deg:
            break

    return TrisectionTrace(
        theta=theta,
        unit=unit,
        rows=tuple(rows),
        converged=step < eps_deg,
        final_third=Angle.from_degrees(rows[-1].third_deg),
    )


def trisect_many(thetas_deg, unit: float = 1.0, eps_deg: float = 1e-7, max_iter: int = 100, backend=None):
    """Vectorised trisection over many angles; see :func:`trisect_iterative`.

    Returns ``(third_deg, iterations, converged)`` numpy arrays.
    """
    thetas = np.asarray(thetas_deg, dtype=np.float64)
    if np.any((thetas <= 0) | (thetas >= 180)):
        raise ValueError("angles to trisect must lie in (0, 180) degrees")
    return _kernels.trisect_sweep(np.radians(thetas), unit, eps_deg, max_iter, backend=backend)


# Beyond this the fixed point puts angle TCL at or past 180 degrees and the
# iteration no longer contracts (observed: 134 deg converges, 135 deg does not).
CONVERGENCE_LIMIT_DEG = 135.0


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    measured: float
    expected: float

    @property
    def error(self) -> float:
        return abs(self.measured - self.expected)


@dataclass(frozen=True)
class ArchimedesReport:
    theta: Angle
    a: Angle
    checks: tuple[IdentityCheck, ...]
    tolerance: float = 1e-6

    @property
    def ok(self) -> bool:
        return all(c.error <= self.tolerance for c in self.checks)


def archimedes_limit_check(theta, tolerance: float = 1e-6, eps_deg: float = 1e-11, max_iter: int = 2000) -> ArchimedesReport:
    """Verify the neusis identities at the converged trisection configuration.

    ``a`` is the measured angle XAI. L is the reflection of X through C, so
    DCL is vertically opposite XCI. All angles are compared in radians.
    """
    theta = _as_angle(theta)
    trace = trisect_iterative(theta, unit=1.0, eps_deg=eps_deg, max_iter=max_iter)
    if not trace.converged:
        raise ValueError(f"trisection did not converge for {theta.degrees} degrees")
    f = _Frame.build(theta, 1.0)
    t = f.carry(trace.rows[-1].cx)
    x = f.cut(t)
    d = Point(1.0, 0.0)
    l_pt = Point(-x.x, -x.y)
    a = angle_at(f.a, x, f.i).radians
    checks = (
        IdentityCheck("XCI = XAI", angle_at(f.c, x, f.i).radians, a),
        IdentityCheck("TXC = 2a", angle_at(x, t, f.c).radians, 2 * a),
        IdentityCheck("TCL = 4a", angle_at(f.c, t, l_pt).radians, 4 * a),
        IdentityCheck("DCL = a", angle_at(f.c, d, l_pt).radians, a),
        IdentityCheck("TCD = 3a", angle_at(f.c, t, d).radians, 3 * a),
    )
    return ArchimedesReport(theta, Angle(a), checks, tolerance)


# --- consecutive-leg Pythagorean triples ----------------------------------------


class Triple(NamedTuple):
    a: int
    b: int
    c: int


def consecutive_leg_triples(n: int) -> list[Triple]:
    """First ``n`` triples (a, a+1, c), smallest first.

    Consecutive legs mean (2a+1)^2 - 2c^2 = -1, a negative Pell equation; its
    solutions are generated by a -> 3a + 2c + 1, c -> 4a + 3c + 2 from (3, 4, 5).
    """
    if n < 1:
        raise ValueError("need at least one triple")
    a, c = 3, 5
    out = []
    for _ in range(n):
        if a * a + (a + 1) ** 2 != c * c:  # pragma: no cover - recurrence invariant
            raise ArithmeticError(f"recurrence broke at a={a}")
        out.append(Triple(a, a + 1, c))
        a, c = 3 * a + 2 * c + 1, 4 * a + 3 * c + 2
    return out


def consecutive_leg_scan(limit: int, backend=None) -> list[Triple]:
    """Exhaustive search for consecutive-leg triples with a < ``limit``."""
    rows = _kernels.consecutive_leg_scan(limit, backend=backend)
    return [Triple(int(a), int(b), int(c)) for a, b, c in rows]
