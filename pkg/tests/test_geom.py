import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pyramid_geometry.geom import (
    Angle,
    Circle,
    CoincidentCirclesError,
    DegenerateError,
    GeometryError,
    Line,
    Point,
    Tolerance,
    angle_at,
    dms,
    intersect_circle_circle,
    intersect_line_circle,
    intersect_line_line,
    midpoint,
    perpendicular_at,
    perpendicular_bisector,
    to_dms,
)

X_AXIS = Line(Point(0, 0), Point(1, 0))
Y_AXIS = Line(Point(0, 0), Point(0, 1))
THETA = dms(54, 27, 44)


def close(p, q, tol=1e-9):
    return p.distance_to(q) <= tol


# --- types ---------------------------------------------------------------------


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        Tolerance(absolute=0)
    with pytest.raises(ValueError):
        Tolerance(relative=-1)


def test_point_rejects_non_finite():
    with pytest.raises(GeometryError):
        Point(math.nan, 0)
    with pytest.raises(GeometryError):
        Point(0, math.inf)


def test_line_normalises_direction_and_rejects_coincident_points():
    line = Line(Point(1, 1), Point(3, 4))
    assert line.direction.norm() == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DegenerateError):
        Line.through(Point(2, 2), Point(2, 2))
    with pytest.raises(DegenerateError):
        Line(Point(0, 0), Point(0, 0))


def test_circle_radius_positive():
    with pytest.raises(GeometryError):
        Circle(Point(0, 0), 0.0)
    with pytest.raises(GeometryError):
        Circle(Point(0, 0), -2.0)


@pytest.mark.parametrize("rad", [-0.5, 7.0, 2 * math.pi, -2 * math.pi, 1e-300])
def test_angle_normalised(rad):
    a = Angle(rad)
    assert 0 <= a.radians < 2 * math.pi


# --- line x line ------------------------------------------------------------------


def test_axes_cross_at_origin():
    assert intersect_line_line(X_AXIS, Y_AXIS) == Point(0, 0)


def test_line_through_s_meets_bisector_at_table_height():
    c = Point(0, 0)
    a = Point(-100, 0)
    s = intersect_line_circle(Line.from_angle(c, THETA), Circle(c, 50))[-1]
    r = intersect_line_line(Line.through(a, s), Line(Point(-50, 0), Point(0, 1)))
    assert r.x == pytest.approx(-50)
    assert r.y == pytest.approx(15.76243, abs=1e-5)


def test_parallel_lines_do_not_meet():
    assert intersect_line_line(X_AXIS, Line(Point(0, 3), Point(2, 0))) is None


# --- line x circle ----------------------------------------------------------------


def test_x_axis_meets_unit_circle_in_parameter_order():
    pts = intersect_line_circle(X_AXIS, Circle(Point(0, 0), 1))
    assert pts == [Point(-1, 0), Point(1, 0)]
    reverse = Line(Point(0, 0), Point(-1, 0))
    assert intersect_line_circle(reverse, Circle(Point(0, 0), 1)) == [Point(1, 0), Point(-1, 0)]


def test_ray_on_slope_meets_circle_at_table_height():
    pts = intersect_line_circle(Line.from_angle(Point(0, 0), Angle.from_degrees(54.46222)), Circle(Point(0, 0), 50))
    assert pts[-1].y == pytest.approx(40.68662, abs=1e-5)


def test_disjoint_line_and_circle():
    assert intersect_line_circle(Line(Point(0, 2), Point(1, 0)), Circle(Point(0, 0), 1)) == []


def test_tangent_line_gives_single_point():
    assert intersect_line_circle(Line(Point(0, 1), Point(1, 0)), Circle(Point(0, 0), 1)) == [Point(0, 1)]


# --- circle x circle --------------------------------------------------------------


def test_tangent_circles():
    pts = intersect_circle_circle(Circle(Point(0, 0), 1), Circle(Point(2, 0), 1))
    assert len(pts) == 1 and close(pts[0], Point(1, 0))


def test_equilateral_circles():
    pts = intersect_circle_circle(Circle(Point(0, 0), 1), Circle(Point(1, 0), 1))
    assert len(pts) == 2
    assert close(pts[0], Point(0.5, -math.sqrt(3) / 2))
    assert close(pts[1], Point(0.5, math.sqrt(3) / 2))


def test_disjoint_and_concentric_circles():
    assert intersect_circle_circle(Circle(Point(0, 0), 1), Circle(Point(5, 0), 1)) == []
    assert intersect_circle_circle(Circle(Point(0, 0), 1), Circle(Point(0, 0), 2)) == []


def test_coincident_circles_are_an_error():
    with pytest.raises(CoincidentCirclesError):
        intersect_circle_circle(Circle(Point(1, 1), 2), Circle(Point(1, 1), 2))


# --- constructions ----------------------------------------------------------------


def test_midpoint_of_ac_is_i():
    assert midpoint(Point(-100, 0), Point(0, 0)) == Point(-50, 0)
    with pytest.raises(DegenerateError):
        midpoint(Point(1, 1), Point(1, 1))


def test_perpendicular_at_origin_is_y_axis():
    perp = perpendicular_at(X_AXIS, Point(0, 0))
    assert perp.anchor == Point(0, 0)
    assert abs(perp.direction.x) < 1e-15 and abs(perp.direction.y) == pytest.approx(1)


def test_perpendicular_bisector_is_vertical_line():
    b = perpendicular_bisector(Point(0, 0), Point(2, 0))
    assert b.anchor == Point(1, 0)
    assert b.distance_to(Point(1, 17)) < 1e-12
    with pytest.raises(DegenerateError):
        perpendicular_bisector(Point(3, 3), Point(3, 3))


# --- angles -----------------------------------------------------------------------


def test_right_angle():
    assert angle_at(Point(0, 0), Point(1, 0), Point(0, 1)).degrees == pytest.approx(90)


def test_palier_angle_bad():
    # A at origin, B on the pyramid axis 280 cubits away at the bend height
    bad = angle_at(Point(-100, 0), Point(180, 0), Point(180, 92.15))
    assert bad.degrees == pytest.approx(18.2167, abs=1e-4)
    assert bad.degrees == pytest.approx(dms(18, 13, 12).degrees, abs=5e-3)


def test_slope_angle_kcd():
    kcd = angle_at(Point(0, 0), Point(180, 0), Point(180, 252))
    assert kcd.degrees == pytest.approx(math.degrees(math.atan2(252, 180)), abs=1e-12)
    assert kcd.degrees == pytest.approx(54.46232, abs=1e-5)


def test_angle_degenerate():
    with pytest.raises(DegenerateError):
        angle_at(Point(0, 0), Point(0, 0), Point(1, 1))


def test_angle_is_non_reflex():
    a = angle_at(Point(0, 0), Point(1, 0), Point(-1, -1e-3))
    assert a.degrees < 180


@pytest.mark.parametrize(
    "d, m, s, expected",
    [(54, 27, 44, 54.462222), (18, 9, 15, 18.154167), (0, 0, 0, 0.0)],
)
def test_dms_to_decimal(d, m, s, expected):
    assert dms(d, m, s).degrees == pytest.approx(expected, abs=5e-7)


@pytest.mark.parametrize("args", [(10, 60, 0), (10, 0, 60), (10, -1, 0), (10.5, 0, 0)])
def test_dms_out_of_range(args):
    with pytest.raises(GeometryError):
        dms(*args)


def test_dms_inverse_carries_seconds():
    assert to_dms(Angle.from_degrees(10 + 59 / 60 + 59.6 / 3600)) == (11, 0, 0)
    assert to_dms(dms(54, 27, 44)) == (54, 27, 44)
    assert to_dms(Angle.from_degrees(18.15407), places=2) == (18, 9, 14.65)


# --- properties -------------------------------------------------------------------

coord = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
radius = st.floats(min_value=1e-2, max_value=1e3)
points = st.builds(Point, coord, coord)


@given(points, points, points)
def test_angle_symmetric_exactly(v, p, q):
    assume(v.distance_to(p) > 1e-6 and v.distance_to(q) > 1e-6)
    assert angle_at(v, p, q) == angle_at(v, q, p)


@given(points, points, points, st.floats(-math.pi, math.pi), st.floats(1e-2, 1e2), points)
def test_angle_invariant_under_similarity(v, p, q, rot, k, shift):
    assume(v.distance_to(p) > 1e-3 and v.distance_to(q) > 1e-3)
    c, s = math.cos(rot), math.sin(rot)

    def move(pt):
        return Point(k * (c * pt.x - s * pt.y) + shift.x, k * (s * pt.x + c * pt.y) + shift.y)

    before = angle_at(v, p, q).radians
    after = angle_at(move(v), move(p), move(q)).radians
    assert after == pytest.approx(before, abs=1e-9)


@given(st.integers(0, 359), st.integers(0, 59), st.integers(0, 59))
def test_dms_round_trip(d, m, s):
    assert to_dms(dms(d, m, s)) == (d, m, s)


@given(points, points, points, points)
def test_line_line_locus(a0, a1, b0, b1):
    assume(a0.distance_to(a1) > 1e-3 and b0.distance_to(b1) > 1e-3)
    la, lb = Line.through(a0, a1), Line.through(b0, b1)
    cross = la.direction.x * lb.direction.y - la.direction.y * lb.direction.x
    assume(abs(cross) > 1e-3)
    p = intersect_line_line(la, lb)
    assert la.distance_to(p) <= 1e-9 * max(1.0, p.norm())
    assert lb.distance_to(p) <= 1e-9 * max(1.0, p.norm())


@given(points, points, points, radius)
def test_line_circle_locus(a0, a1, c, r):
    assume(a0.distance_to(a1) > 1e-3)
    line, circle = Line.through(a0, a1), Circle(c, r)
    pts = intersect_line_circle(line, circle)
    for p in pts:
        assert line.distance_to(p) <= 1e-9
        assert circle.residual(p) <= 1e-9
    if len(pts) == 2:
        assert line.parameter_of(pts[0]) < line.parameter_of(pts[1])


@given(points, radius, points, radius)
def test_circle_circle_locus(c1, r1, c2, r2):
    assume(c1.distance_to(c2) > 1e-6)
    a, b = Circle(c1, r1), Circle(c2, r2)
    for p in intersect_circle_circle(a, b):
        assert a.residual(p) <= 1e-9
        assert b.residual(p) <= 1e-9


@settings(max_examples=200)
@given(points, points)
def test_bisector_through_midpoint_at_right_angle(p, q):
    assume(p.distance_to(q) > 1e-6)
    b = perpendicular_bisector(p, q)
    assert b.distance_to(midpoint(p, q)) <= 1e-9 * max(1.0, p.norm(), q.norm())
    base = Line.through(p, q)
    dot = b.direction.x * base.direction.x + b.direction.y * base.direction.y
    assert abs(math.pi / 2 - math.acos(max(-1.0, min(1.0, dot)))) <= 1e-9
