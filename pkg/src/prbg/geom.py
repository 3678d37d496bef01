"""Planar predicates over exact rationals or floats.

Coordinates are either :class:`fractions.Fraction` (rational mode, every
predicate is exact) or finite ``float`` (float mode, best effort). A point
never mixes the two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)


class GeometryError(ValueError):
    pass


class MixedModeError(GeometryError):
    pass


class DegenerateError(GeometryError):
    pass


class DuplicatePointError(GeometryError):
    pass


class NotConvexError(GeometryError):
    pass


def coerce_coordinate(value, mode: str | None = None):
    """Turn ``value`` into a Fraction or a finite float.

    Integers and ``"num/den"`` strings become Fractions unless ``mode`` asks
    for floats.
    """
    if mode == FLOAT:
        value = float(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise GeometryError(f"non-finite coordinate {value!r}")
        if mode == RATIONAL:
            return Fraction(value)
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(value, (int, Fraction, str)):
        return Fraction(value)
    raise TypeError(f"unsupported coordinate type {type(value).__name__}")


@dataclass(frozen=True)
class Point:
    x: Fraction | float
    y: Fraction | float

    def __post_init__(self):
        x = coerce_coordinate(self.x)
        y = coerce_coordinate(self.y)
        if isinstance(x, float) != isinstance(y, float):
            raise MixedModeError(f"point mixes coordinate modes: {self.x!r}, {self.y!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def mode(self) -> str:
        return FLOAT if isinstance(self.x, float) else RATIONAL

    def as_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)

    def __iter__(self):
        yield self.x
        yield self.y

    def __repr__(self):
        return f"Point({self.x}, {self.y})"


def to_mode(p: Point, mode: str) -> Point:
    if p.mode == mode:
        return p
    if mode == FLOAT:
        return Point(float(p.x), float(p.y))
    return Point(Fraction(p.x), Fraction(p.y))


def _same_mode(*points: Point) -> None:
    mode = points[0].mode
    for p in points[1:]:
        if p.mode != mode:
            raise MixedModeError("points use different coordinate modes")


class Orientation(Enum):
    LEFT = 1
    RIGHT = -1
    COLLINEAR = 0


class AngleClass(Enum):
    ACUTE = "acute"
    RIGHT = "right"
    OBTUSE = "obtuse"


def _sign(value) -> int:
    return (value > 0) - (value < 0)


def cross(o: Point, a: Point, b: Point):
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def dot(o: Point, a: Point, b: Point):
    return (a.x - o.x) * (b.x - o.x) + (a.y - o.y) * (b.y - o.y)


def orientation(a: Point, b: Point, c: Point) -> Orientation:
    _same_mode(a, b, c)
    return Orientation(_sign(cross(a, b, c)))


def angle_class(apex: Point, p: Point, q: Point) -> AngleClass:
    """Classify the angle at ``apex`` spanned by ``p`` and ``q``."""
    _same_mode(apex, p, q)
    if apex == p or apex == q:
        raise DegenerateError("angle apex coincides with an arm endpoint")
    s = _sign(dot(apex, p, q))
    if s > 0:
        return AngleClass.ACUTE
    if s == 0:
        return AngleClass.RIGHT
    return AngleClass.OBTUSE


def squared_distance(p: Point, q: Point):
    _same_mode(p, q)
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def in_diameter_disk(x: Point, a: Point, b: Point) -> bool:
    """True iff ``x`` lies in the closed disk with diameter ``ab``."""
    if a == b:
        raise DegenerateError("diameter endpoints coincide")
    if x == a or x == b:
        raise DegenerateError("query point equals a diameter endpoint")
    return angle_class(x, a, b) is not AngleClass.ACUTE


def convex_hull(points: Sequence[Point]) -> list[int]:
    """Indices of the strict convex hull in counterclockwise order.

    Collinear boundary points are excluded. Starts at the lexicographically
    smallest point.
    """
    _same_mode(*points)
    order = sorted(range(len(points)), key=lambda i: (points[i].x, points[i].y))
    if len(order) < 3:
        return order

    def chain(indices):
        out: list[int] = []
        for i in indices:
            while len(out) >= 2 and cross(points[out[-2]], points[out[-1]], points[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    return lower[:-1] + upper[:-1]


def _check_duplicates(points: Sequence[Point]) -> None:
    seen: dict[Point, int] = {}
    for i, p in enumerate(points):
        if p in seen:
            raise DuplicatePointError(f"points {seen[p]} and {i} coincide at {p}")
        seen[p] = i


def is_convex_position(points: Sequence[Point]) -> bool:
    """True iff every point is a strict hull vertex (no three collinear).

    Raises DuplicatePointError for repeated points, which is a different
    failure than a point lying inside the hull.
    """
    if len(points) < 3:
        raise GeometryError("convex position needs at least 3 points")
    _check_duplicates(points)
    return len(convex_hull(points)) == len(points)


class ConvexPointSet:
    """Points in strictly convex position, stored in counterclockwise order."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable[Point]):
        pts = tuple(points)
        if len(pts) < 3:
            raise GeometryError("a convex point set needs at least 3 points")
        _same_mode(*pts)
        if not is_convex_position(pts):
            raise NotConvexError("points are not in strictly convex position")
        n = len(pts)
        for i in range(n):
            if cross(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]) <= 0:
                raise NotConvexError(f"points are not in counterclockwise order at index {i}")
        # all left turns can still wind twice around; the hull pins the order
        hull = convex_hull(pts)
        k = hull.index(0)
        if hull[k:] + hull[:k] != list(range(n)):
            raise NotConvexError("points are not in counterclockwise hull order")
        self.points = pts

    @classmethod
    def from_unordered(cls, points: Iterable[Point]) -> "ConvexPointSet":
        pts = list(points)
        if len(pts) >= 3:
            _check_duplicates(pts)
        hull = convex_hull(pts)
        if len(hull) != len(pts):
            raise NotConvexError("points are not in strictly convex position")
        return cls(pts[i] for i in hull)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def mode(self) -> str:
        return self.points[0].mode

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return isinstance(other, ConvexPointSet) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"ConvexPointSet(n={self.n}, mode={self.mode})"


def antipodal_pairs(cps: ConvexPointSet) -> list[tuple[int, int]]:
    """All antipodal index pairs by rotating calipers, ascending.

    Supporting lines may pass through further points (weak betweenness), so
    a pair of parallel hull edges contributes all four endpoint pairs.
    """
    pts = cps.points
    n = len(pts)
    pairs: set[tuple[int, int]] = set()

    def add(i, j):
        if i != j:
            pairs.add((min(i, j), max(i, j)))

    def edge_turn(i, j):
        # > 0 while edge j still climbs away from the line of edge i
        a, b = pts[i], pts[(i + 1) % n]
        c, d = pts[j % n], pts[(j + 1) % n]
        return (b.x - a.x) * (d.y - c.y) - (b.y - a.y) * (d.x - c.x)

    j = 1
    for i in range(n):
        while edge_turn(i, j) > 0:
            j += 1
        add(i, j % n)
        add((i + 1) % n, j % n)
        if edge_turn(i, j) == 0:
            add(i, (j + 1) % n)
            add((i + 1) % n, (j + 1) % n)
    return sorted(pairs)
