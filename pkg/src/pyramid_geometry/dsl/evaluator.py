"""Evaluation of parsed construction scripts.

Values are plain floats or the immutable geometry types. Statements run left
to right; every binding is recorded in insertion order so a renderer can
replay them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import geom
from ..classical import sphere_metrics
from ..geom import Angle, Circle, Line, Point
from .syntax import (
    Assert,
    BinOp,
    Binding,
    Call,
    DslError,
    Name,
    Neg,
    Node,
    Num,
    Pair,
    Program,
    Ref,
)

Value = float | Point | Line | Circle | Angle
Resolver = Callable[[Ref], float]

_KIND_TYPES = {"num": float, "point": Point, "line": Line, "circle": Circle, "angle": Angle}


class EvalError(DslError):
    pass


def type_name(v) -> str:
    return "number" if isinstance(v, float) else type(v).__name__.lower()


@dataclass
class Env:
    bindings: dict[str, Value] = field(default_factory=dict)
    kinds: dict[str, str] = field(default_factory=dict)

    def bind(self, name: str, kind: str, value: Value) -> None:
        self.bindings[name] = value
        self.kinds[name] = kind

    def items(self):
        return [(n, self.kinds[n], v) for n, v in self.bindings.items()]


@dataclass(frozen=True)
class AssertionResult:
    line: int
    source: str
    actual: float
    expected: float
    tol: float
    passed: bool


@dataclass
class EvalResult:
    env: Env
    assertions: list[AssertionResult]

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)


def _err(node: Node, message: str) -> EvalError:
    line, col = getattr(node, "pos", (0, 0))
    return EvalError(message, line, col)


# --- builtins -------------------------------------------------------------------


def _want(node, value, *types, what=None):
    if not isinstance(value, types):
        names = " or ".join("number" if t is float else t.__name__.lower() for t in types)
        raise _err(node, f"{what or 'argument'}: expected {names}, got {type_name(value)}")
    return value


def _positive(node, x):
    _want(node, x, float)
    if x <= 0:
        raise _err(node, f"expected a positive number, got {x!r}")
    return x


def _index(node, x):
    _want(node, x, float, what="intersection index")
    if x != int(x) or x < 0:
        raise _err(node, f"intersection index must be 0 or 1, got {x!r}")
    return int(x)


def _b_circle(node, c, r):
    _want(node, c, Point, what="circle centre")
    _want(node, r, float, Point, what="circle radius")
    radius = c.distance_to(r) if isinstance(r, Point) else r
    return Circle(c, _positive(node, radius))


def _b_intersect(node, a, b, idx=0.0):
    _want(node, a, Line, Circle)
    _want(node, b, Line, Circle)
    pts = geom.intersect(a, b)
    i = _index(node, idx)
    if not pts:
        raise _err(node, "empty intersection where a point is required")
    if i >= len(pts):
        raise _err(node, f"intersection index {i} out of range: only {len(pts)} point(s)")
    return pts[i]


def _b_dms(node, d, m=0.0, s=0.0):
    for v in (d, m, s):
        _want(node, v, float)
    return geom.dms(d, m, s)


def _b_ray(node, origin, angle):
    _want(node, origin, Point, what="ray origin")
    _want(node, angle, Angle, what="ray direction")
    return Line.from_angle(origin, angle)


def _num1(fn):
    def wrapped(node, x):
        return float(fn(_want(node, x, float)))

    return wrapped


def _sqrt(x):
    if x < 0:
        raise ValueError("square root of a negative number")
    return math.sqrt(x)


_BUILTIN_IMPLS: dict[str, Callable] = {
    "point": lambda n, x, y: Point(_want(n, x, float), _want(n, y, float)),
    "midpoint": lambda n, p, q: geom.midpoint(_want(n, p, Point), _want(n, q, Point)),
    "line": lambda n, p, q: Line.through(_want(n, p, Point), _want(n, q, Point)),
    "ray": _b_ray,
    "circle": _b_circle,
    "perp_at": lambda n, l, p: geom.perpendicular_at(_want(n, l, Line), _want(n, p, Point)),
    "perp_bisector": lambda n, p, q: geom.perpendicular_bisector(_want(n, p, Point), _want(n, q, Point)),
    "intersect": _b_intersect,
    "dist": lambda n, p, q: geom.distance(_want(n, p, Point), _want(n, q, Point)),
    "angle_at": lambda n, v, p, q: geom.angle_at(_want(n, v, Point), _want(n, p, Point), _want(n, q, Point)),
    "sphere_vol": lambda n, r: sphere_metrics(_positive(n, r)).volume,
    "sphere_area": lambda n, r: sphere_metrics(_positive(n, r)).area,
    "circle_circ": lambda n, r: sphere_metrics(_positive(n, r)).circumference,
    "sqrt": _num1(_sqrt),
    "cbrt": _num1(np.cbrt),
    "abs": _num1(abs),
    "pi": lambda n: math.pi,
    "dms": _b_dms,
}


# --- arithmetic -----------------------------------------------------------------


def _arith(node: BinOp, a: Value, b: Value) -> Value:
    op = node.op
    if isinstance(a, float) and isinstance(b, float):
        try:
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "/":
                return a / b
            r = a**b
        except ZeroDivisionError:
            raise _err(node, "division by zero") from None
        except OverflowError as exc:
            raise _err(node, str(exc)) from None
        if isinstance(r, complex):
            raise _err(node, "non-real power")
        return float(r)
    if isinstance(a, Angle) and isinstance(b, Angle):
        if op == "+":
            return Angle(a.radians + b.radians)
        if op == "-":
            return Angle(a.radians - b.radians)
        if op == "/":
            if b.radians == 0:
                raise _err(node, "division by zero")
            return a.radians / b.radians
    if isinstance(a, Angle) and isinstance(b, float):
        if op == "*":
            return Angle(a.radians * b)
        if op == "/":
            if b == 0:
                raise _err(node, "division by zero")
            return Angle(a.radians / b)
    if isinstance(a, float) and isinstance(b, Angle) and op == "*":
        return Angle(a * b.radians)
    raise _err(node, f"type mismatch: cannot apply '{op}' to {type_name(a)} and {type_name(b)}")


# --- evaluation -----------------------------------------------------------------


def eval_expr(node: Node, env: Env | None = None, resolver: Resolver | None = None) -> Value:
    env = env or Env()
    if isinstance(node, Num):
        return Angle.from_degrees(node.value) if node.unit == "deg" else float(node.value)
    if isinstance(node, Name):
        if node.id in env.bindings:
            return env.bindings[node.id]
        if node.id == "pi":
            return math.pi
        raise _err(node, f"unbound identifier '{node.id}'")
    if isinstance(node, Ref):
        if resolver is None:
            raise _err(node, f"measurement reference '{node.key}' needs a dataset")
        try:
            return float(resolver(node))
        except DslError:
            raise
        except (KeyError, LookupError, ValueError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            raise _err(node, str(msg)) from None
    if isinstance(node, Pair):
        x = eval_expr(node.x, env, resolver)
        y = eval_expr(node.y, env, resolver)
        return Point(_want(node, x, float, what="x coordinate"), _want(node, y, float, what="y coordinate"))
    if isinstance(node, Neg):
        v = eval_expr(node.operand, env, resolver)
        if isinstance(v, float):
            return -v
        if isinstance(v, Angle):
            return Angle(-v.radians)
        raise _err(node, f"cannot negate {type_name(v)}")
    if isinstance(node, BinOp):
        return _arith(node, eval_expr(node.left, env, resolver), eval_expr(node.right, env, resolver))
    if isinstance(node, Call):
        args = [eval_expr(a, env, resolver) for a in node.args]
        try:
            return _BUILTIN_IMPLS[node.func](node, *args)
        except DslError:
            raise
        except (geom.GeometryError, ValueError, ArithmeticError) as exc:
            raise _err(node, f"{node.func}(): {exc}") from None
    raise _err(node, f"cannot evaluate {type(node).__name__}")


def _magnitude(v: Value) -> float:
    if isinstance(v, Angle):
        return v.degrees
    if isinstance(v, Point):
        return v.norm()
    return v


def _difference(node: Node, a: Value, b: Value) -> float:
    if isinstance(a, float) and isinstance(b, float):
        return abs(a - b)
    if isinstance(a, Angle) and isinstance(b, Angle):
        d = abs(a.degrees - b.degrees)
        return min(d, 360.0 - d)
    if isinstance(a, Point) and isinstance(b, Point):
        return a.distance_to(b)
    raise _err(node, f"cannot compare {type_name(a)} with {type_name(b)}")


def evaluate(program: Program, resolver: Resolver | None = None, filename: str | None = None) -> EvalResult:
    """Run a program. Raises :class:`EvalError` on the first runtime error.

    ``assert approx(a, b, tol)`` passes iff ``|a - b| <= tol * max(|b|, 1)``;
    angles compare in degrees, points by distance.
    """
    from .syntax import to_source

    env = Env()
    results = []
    try:
        for stmt in program.statements:
            if isinstance(stmt, Binding):
                if stmt.name in env.bindings:
                    raise _err(stmt, f"'{stmt.name}' is already bound")
                value = eval_expr(stmt.expr, env, resolver)
                if not isinstance(value, _KIND_TYPES[stmt.kind]):
                    raise _err(stmt, f"'{stmt.name}' declared {stmt.kind} but expression gives {type_name(value)}")
                env.bind(stmt.name, stmt.kind, value)
            elif isinstance(stmt, Assert):
                actual = eval_expr(stmt.actual, env, resolver)
                expected = eval_expr(stmt.expected, env, resolver)
                tol = eval_expr(stmt.tol, env, resolver)
                if not isinstance(tol, float) or tol < 0:
                    raise _err(stmt, "assert tolerance must be a non-negative number")
                diff = _difference(stmt, actual, expected)
                bound = tol * max(abs(_magnitude(expected)), 1.0)
                results.append(
                    AssertionResult(
                        line=stmt.pos[0],
                        source=to_source(stmt),
                        actual=_magnitude(actual),
                        expected=_magnitude(expected),
                        tol=tol,
                        passed=diff <= bound,
                    )
                )
    except DslError as exc:
        exc.filename = filename
        raise
    return EvalResult(env, results)
