"""Unit distance, Gabriel and locally Gabriel graphs on planar point sets."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .geom import (
    FLOAT,
    RATIONAL,
    AngleClass,
    ConvexPointSet,
    GeometryError,
    Point,
    angle_class,
    in_diameter_disk,
    is_convex_position,
    squared_distance,
)

DEFAULT_FLOAT_TOLERANCE = 1e-9

Edge = tuple[int, int]


def _norm(e: Sequence[int]) -> Edge:
    i, j = int(e[0]), int(e[1])
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class GeoGraph:
    """A point list plus undirected edges stored as sorted index pairs."""

    points: tuple[Point, ...]
    edges: frozenset = field(default_factory=frozenset)
    convex: bool = False

    def __post_init__(self):
        pts = tuple(self.points.points if isinstance(self.points, ConvexPointSet) else self.points)
        object.__setattr__(self, "points", pts)
        n = len(pts)
        edges = set()
        for e in self.edges:
            i, j = _norm(e)
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"invalid edge {e} for {n} points")
            if (i, j) in edges:
                raise ValueError(f"duplicate edge {(i, j)}")
            edges.add((i, j))
        object.__setattr__(self, "edges", frozenset(edges))
        if self.convex and not is_convex_position(pts):
            raise GeometryError("graph flagged convex but points are not in convex position")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def mode(self) -> str:
        return self.points[0].mode if self.points else RATIONAL

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def neighbors(self, i: int) -> list[int]:
        return sorted({b if a == i else a for a, b in self.edges if i in (a, b)})

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def with_edges(self, edges: Iterable[Sequence[int]]) -> "GeoGraph":
        return GeoGraph(self.points, frozenset(_norm(e) for e in edges), self.convex)

    def __len__(self):
        return len(self.edges)


def _as_points(points) -> tuple[tuple[Point, ...], bool]:
    if isinstance(points, ConvexPointSet):
        return points.points, True
    if isinstance(points, GeoGraph):
        return points.points, points.convex
    pts = tuple(points)
    convex = len(pts) >= 3 and is_convex_position(pts)
    return pts, convex


def build_udg(points, tolerance: float | None = None) -> GeoGraph:
    """Every pair at squared distance 1, within ``tolerance`` in float mode."""
    pts, convex = _as_points(points)
    mode = pts[0].mode if pts else RATIONAL
    if mode == RATIONAL:
        if tolerance:
            raise ValueError("rational mode requires tolerance 0: unit distance must be exact")
        tol = 0
    else:
        tol = DEFAULT_FLOAT_TOLERANCE if tolerance is None else tolerance
        if tol < 0:
            raise ValueError("tolerance must be nonnegative")
    edges = set()
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            d = squared_distance(pts[i], pts[j])
            if (d == 1) if mode == RATIONAL else abs(d - 1.0) <= tol:
                edges.add((i, j))
    return GeoGraph(pts, frozenset(edges), convex)


def build_gabriel(points) -> GeoGraph:
    """Edge iff the closed diameter disk holds no third point."""
    pts, convex = _as_points(points)
    n = len(pts)
    if len(set(pts)) != n:
        raise GeometryError("Gabriel graph needs distinct points")
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if not any(in_diameter_disk(pts[k], pts[i], pts[j]) for k in range(n) if k != i and k != j):
                edges.add((i, j))
    return GeoGraph(pts, frozenset(edges), convex)


def conflict(points: Sequence[Point], u: int, v: int, w: int) -> bool:
    """Edges (u, v) and (u, w) cannot coexist in a locally Gabriel graph."""
    pu, pv, pw = points[u], points[v], points[w]
    return (
        angle_class(pw, pu, pv) is not AngleClass.ACUTE
        or angle_class(pv, pu, pw) is not AngleClass.ACUTE
    )


def _shared(e1: Edge, e2: Edge) -> tuple[int, int, int]:
    common = set(e1) & set(e2)
    if len(common) != 1 or set(e1) == set(e2):
        raise ValueError(f"edges {e1} and {e2} must share exactly one endpoint")
    (u,) = common
    v = e1[0] if e1[1] == u else e1[1]
    w = e2[0] if e2[1] == u else e2[1]
    return u, v, w


def edges_conflict(g: GeoGraph, e1: Sequence[int], e2: Sequence[int]) -> bool:
    u, v, w = _shared(_norm(e1), _norm(e2))
    return conflict(g.points, u, v, w)


class LGGCheck(NamedTuple):
    valid: bool
    violation: tuple[Edge, Edge] | None = None

    def __bool__(self):
        return self.valid


def is_valid_lgg(g: GeoGraph) -> LGGCheck:
    """Check that no two edges at a common vertex conflict."""
    adj = g.adjacency()
    for u in range(g.n):
        nbrs = sorted(adj[u])
        for a in range(len(nbrs)):
            for b in range(a + 1, len(nbrs)):
                v, w = nbrs[a], nbrs[b]
                if conflict(g.points, u, v, w):
                    return LGGCheck(False, (_norm((u, v)), _norm((u, w))))
    return LGGCheck(True)


def default_edge_order(points: Sequence[Point]) -> list[Edge]:
    """Candidate pairs sorted by (squared length, index pair)."""
    n = len(points)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return sorted(pairs, key=lambda e: (squared_distance(points[e[0]], points[e[1]]), e))


def shuffled_edge_order(points: Sequence[Point], seed: int) -> list[Edge]:
    order = default_edge_order(points)
    random.Random(seed).shuffle(order)
    return order


def greedy_maximal_lgg(points, edge_order: Sequence[Sequence[int]] | None = None,
                       seed: int | None = None) -> GeoGraph:
    """Insert candidate pairs in order, skipping any that conflicts.

    Rejected pairs stay rejected because edges are never removed, so one
    pass yields a maximal locally Gabriel graph.
    """
    pts, convex = _as_points(points)
    n = len(pts)
    if edge_order is None:
        order = default_edge_order(pts) if seed is None else shuffled_edge_order(pts, seed)
    else:
        order = [_norm(e) for e in edge_order]
        if sorted(order) != [(i, j) for i in range(n) for j in range(i + 1, n)]:
            raise ValueError("edge_order must be a permutation of all point pairs")
    adj: list[set[int]] = [set() for _ in range(n)]
    edges = set()
    for i, j in order:
        if any(conflict(pts, i, j, w) for w in adj[i]) or any(conflict(pts, j, i, w) for w in adj[j]):
            continue
        adj[i].add(j)
        adj[j].add(i)
        edges.add((i, j))
    return GeoGraph(pts, frozenset(edges), convex)


MAX_BRUTEFORCE_POINTS = 9


def max_lgg_bruteforce(points) -> tuple[int, GeoGraph]:
    """Largest conflict-free edge set, by branch and bound.

    Locally Gabriel validity is a pairwise constraint between edges, so this
    is a maximum independent set in the conflict graph on candidate pairs.
    """
    pts, convex = _as_points(points)
    n = len(pts)
    if n > MAX_BRUTEFORCE_POINTS:
        raise ValueError(f"max_lgg_bruteforce is limited to {MAX_BRUTEFORCE_POINTS} points, got {n}")
    cands = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = len(cands)
    blocked = [0] * m
    for a in range(m):
        for b in range(a + 1, m):
            ea, eb = cands[a], cands[b]
            common = set(ea) & set(eb)
            if len(common) == 1:
                u, v, w = _shared(ea, eb)
                if conflict(pts, u, v, w):
                    blocked[a] |= 1 << b
                    blocked[b] |= 1 << a

    best = [0, 0]

    def search(chosen: int, count: int, free: int) -> None:
        if count + bin(free).count("1") <= best[0]:
            return
        if not free:
            best[0], best[1] = count, chosen
            return
        # branch on the free candidate with most free conflicts
        pick, pick_deg = -1, -1
        f = free
        while f:
            low = f & -f
            k = low.bit_length() - 1
            deg = bin(blocked[k] & free).count("1")
            if deg > pick_deg:
                pick, pick_deg = k, deg
            f ^= low
        if pick_deg == 0:
            best[0], best[1] = count + bin(free).count("1"), chosen | free
            return
        bit = 1 << pick
        search(chosen | bit, count + 1, free & ~bit & ~blocked[pick])
        search(chosen, count, free & ~bit)

    search(0, 0, (1 << m) - 1)
    chosen = best[1]
    edges = frozenset(cands[k] for k in range(m) if chosen >> k & 1)
    return best[0], GeoGraph(pts, edges, convex)
