"""Split a convex proximity graph into two path-restricted bipartite graphs.

The pipeline cuts the point set along an antipodal pair, keeps the edges
crossing the cut, sorts each crossing edge into one of two classes by the
angle it makes with the neighbouring V points, and trims one extreme edge
per V vertex in each class.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .geom import (
    AngleClass,
    ConvexPointSet,
    GeometryError,
    Point,
    angle_class,
    antipodal_pairs,
    cross,
)
from .obg import OBG, PRBGResult, is_prbg
from .proximity import GeoGraph, is_valid_lgg

LEFT = "left"
RIGHT = "right"


class DecompositionError(ValueError):
    pass


class NotPathRestrictedError(DecompositionError):
    """A decomposed class failed the path-restricted check."""

    def __init__(self, which: str, result: PRBGResult, decomposition: "Decomposition"):
        self.which = which
        self.result = result
        self.decomposition = decomposition
        path = " ".join(str(x) for x in result.path or ())
        super().__init__(f"{which} is not path restricted: path {path}, back edge {result.back_edge}")


def _hull_order(g: GeoGraph) -> list[int]:
    cps = ConvexPointSet.from_unordered(g.points)
    index = {p: i for i, p in enumerate(g.points)}
    return [index[p] for p in cps.points]


@dataclass(frozen=True)
class Split:
    """Crossing structure of one antipodal cut.

    ``u_points`` and ``v_points`` hold point indices in increasing order,
    i.e. starting next to the first point of the pair.
    """

    pair: tuple[int, int]
    u_points: tuple[int, ...]
    v_points: tuple[int, ...]
    crossing: tuple[tuple[int, int], ...]  # (u index, v index)
    dropped: tuple[tuple[int, int], ...]  # source edges as point pairs


def split_by_antipodal(g: GeoGraph, pair: Sequence[int]) -> Split:
    if g.n < 3:
        raise GeometryError("need at least 3 points")
    order = _hull_order(g)
    i, j = int(pair[0]), int(pair[1])
    pos = {p: k for k, p in enumerate(order)}
    ccw = ConvexPointSet(g.points[p] for p in order)
    if (min(pos[i], pos[j]), max(pos[i], pos[j])) not in set(antipodal_pairs(ccw)):
        raise GeometryError(f"points {i} and {j} are not antipodal")
    n = g.n
    # both sides listed starting next to point i
    side_a = []
    k = (pos[i] + 1) % n
    while order[k] != j:
        side_a.append(order[k])
        k = (k + 1) % n
    side_b = []
    k = (pos[i] - 1) % n
    while order[k] != j:
        side_b.append(order[k])
        k = (k - 1) % n
    # fewer points go to V; on a tie V holds the lower point index
    if len(side_b) < len(side_a) or (len(side_b) == len(side_a) and side_b and min(side_b) < min(side_a)):
        u_pts, v_pts = side_a, side_b
    else:
        u_pts, v_pts = side_b, side_a
    pi, pj = g.points[i], g.points[j]
    for p in u_pts + v_pts:
        if cross(pi, pj, g.points[p]) == 0:
            raise GeometryError(f"point {p} lies on the cut line")
    u_of = {p: k for k, p in enumerate(u_pts)}
    v_of = {p: k for k, p in enumerate(v_pts)}
    crossing = []
    dropped = []
    for a, b in sorted(g.edges):
        if a in u_of and b in v_of:
            crossing.append((u_of[a], v_of[b]))
        elif b in u_of and a in v_of:
            crossing.append((u_of[b], v_of[a]))
        else:
            dropped.append((a, b))
    return Split((i, j), tuple(u_pts), tuple(v_pts), tuple(sorted(crossing)), tuple(dropped))


def partition_e1_e2(points: Sequence[Point], split: Split) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Sort crossing edges by the angle at their V end.

    An edge goes to the first class when the angle towards the next V point
    (higher order) is acute, else to the second when the angle towards the
    previous one is acute. The cut points stand in for missing neighbours.
    """
    vs = [split.pair[0], *split.v_points, split.pair[1]]
    e1, e2 = [], []
    for u, v in split.crossing:
        pu = points[split.u_points[u]]
        here = points[vs[v + 1]]
        if angle_class(here, pu, points[vs[v + 2]]) is AngleClass.ACUTE:
            e1.append((u, v))
        elif angle_class(here, pu, points[vs[v]]) is AngleClass.ACUTE:
            e2.append((u, v))
        else:
            raise GeometryError(f"edge {(split.u_points[u], split.v_points[v])} has no acute side angle")
    return e1, e2


def trim(g: OBG, side: str) -> tuple[OBG, list[tuple[int, int]]]:
    """Remove, for every V vertex, its edge to the highest (left) or lowest (right) U neighbour."""
    if side not in (LEFT, RIGHT):
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}")
    removed = []
    for v in range(g.v_count):
        nbrs = g.nbr_v(v)
        if nbrs:
            removed.append((nbrs[-1] if side == LEFT else nbrs[0], v))
    return g.without(removed), sorted(removed)


@dataclass(frozen=True)
class Decomposition:
    source: GeoGraph
    pair: tuple[int, int]
    g1: OBG
    g2: OBG
    noncrossing_dropped: tuple
    left_trimmed: tuple  # point pairs
    right_trimmed: tuple
    u_map: tuple[int, ...]  # g1 index -> point index; g2 uses the reverse
    v_map: tuple[int, ...]
    checks: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.source.n

    def point_edge(self, which: int, e: tuple[int, int]) -> tuple[int, int]:
        """Source point pair of an edge of g1 (which=1) or g2 (which=2)."""
        u, v = e
        if which == 2:
            u, v = len(self.u_map) - 1 - u, len(self.v_map) - 1 - v
        a, b = self.u_map[u], self.v_map[v]
        return (a, b) if a < b else (b, a)

    @property
    def total_dropped(self) -> int:
        return len(self.noncrossing_dropped) + len(self.left_trimmed) + len(self.right_trimmed)

    def accounted_edges(self) -> list[tuple[int, int]]:
        out = [self.point_edge(1, e) for e in self.g1.edges]
        out += [self.point_edge(2, e) for e in self.g2.edges]
        out += list(self.noncrossing_dropped) + list(self.left_trimmed) + list(self.right_trimmed)
        return sorted(out)


def balanced_pair(g: GeoGraph) -> tuple[int, int]:
    """Antipodal pair whose sides differ least in size, then smallest indices."""
    order = _hull_order(g)
    n = g.n
    best = None
    for a, b in antipodal_pairs(ConvexPointSet(g.points[p] for p in order)):
        inside = b - a - 1
        key = (abs(inside - (n - 2 - inside)), tuple(sorted((order[a], order[b]))))
        if best is None or key < best:
            best = key
    return best[1]


def decompose_full(g: GeoGraph, pair: Sequence[int] | str = "auto", check: bool = True) -> Decomposition:
    """Run split, angle partition and both trims.

    With ``check`` (default) both classes are verified path restricted and
    a failure raises NotPathRestrictedError carrying the witness.
    """
    if not g.convex:
        raise GeometryError("decomposition needs points in convex position")
    lgg = is_valid_lgg(g)
    if not lgg:
        raise DecompositionError(f"input is not a locally Gabriel graph: {lgg.violation}")
    if isinstance(pair, str):
        if pair != "auto":
            raise ValueError(f"unknown pair policy {pair!r}")
        pair = balanced_pair(g)
    split = split_by_antipodal(g, pair)
    e1, e2 = partition_e1_e2(g.points, split)
    nu, nv = len(split.u_points), len(split.v_points)
    raw1 = OBG(nu, nv, frozenset(e1))
    raw2 = OBG(nu, nv, frozenset(e2)).reversed()
    g1, cut1 = trim(raw1, LEFT)
    g2, cut2 = trim(raw2, LEFT)

    def pts(es, reverse):
        out = []
        for u, v in es:
            if reverse:
                u, v = nu - 1 - u, nv - 1 - v
            a, b = split.u_points[u], split.v_points[v]
            out.append((min(a, b), max(a, b)))
        return tuple(sorted(out))

    d = Decomposition(
        source=g,
        pair=tuple(split.pair),
        g1=g1,
        g2=g2,
        noncrossing_dropped=split.dropped,
        left_trimmed=pts(cut1, False),
        right_trimmed=pts(cut2, True),
        u_map=split.u_points,
        v_map=split.v_points,
    )
    if check:
        for name, h in (("g1", g1), ("g2", g2)):
            res = is_prbg(h)
            d.checks[name] = res
            if not res:
                raise NotPathRestrictedError(name, res, d)
    return d
